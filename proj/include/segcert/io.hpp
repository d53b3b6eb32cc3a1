#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "segcert/interval.hpp"
#include "segcert/model.hpp"
#include "segcert/norms.hpp"
#include "segcert/refinement.hpp"
#include "segcert/sandbox.hpp"
#include "segcert/segment.hpp"

namespace segcert {

using Json = nlohmann::ordered_json;

/// Schema or content problem in a config/certificate file. The CLI maps
/// this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr int kSchemaVersion = 1;

namespace io_detail {

/// Shortest round-trip decimal form; reals are never emitted as bare JSON
/// numbers so outward-rounding semantics survive serialization.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double_exact(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ConfigError("malformed real '" + s + "'");
    return v;
}

inline Json interval_to_json(const Interval& x) {
    return Json::array({format_double(x.lo), format_double(x.hi)});
}

inline Interval interval_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2)
        throw ConfigError("interval must be a [lo, hi] pair of decimal strings");
    return {parse_double_exact(j[0].get<std::string>()),
            parse_double_exact(j[1].get<std::string>())};
}

inline std::string require_string(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string())
        throw ConfigError(std::string("missing or non-string key '") + key + "'");
    return j[key].get<std::string>();
}

inline Interval decimal_field(const Json& j, const char* key) {
    const std::string text = require_string(j, key);
    try {
        return from_decimal(text);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("key '") + key + "': " + e.what());
    }
}

inline void reject_unknown_keys(const Json& j, std::initializer_list<const char*> allowed,
                                const char* where) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : allowed) known = known || item.key() == k;
        if (!known)
            throw ConfigError(std::string("unknown key '") + item.key() + "' in " + where);
    }
}

}  // namespace io_detail

/// A fully parsed run configuration.
struct ParsedConfig {
    Problem problem;
    int M = 6;
    std::optional<Segment> segment;
    RefineOptions refine;
};

inline ParsedConfig parse_config_json(const Json& j) {
    using namespace io_detail;
    if (!j.is_object()) throw ConfigError("config root must be an object");
    reject_unknown_keys(
        j, {"schema_version", "beta", "sigma", "epsilon", "forcing", "M", "segment", "refine"},
        "config");
    if (!j.contains("schema_version") || !j["schema_version"].is_number_integer())
        throw ConfigError("missing integer key 'schema_version'");
    if (j["schema_version"].get<int>() != kSchemaVersion)
        throw ConfigError("unsupported schema_version (expected 1)");

    const Interval beta = decimal_field(j, "beta");
    const Interval sigma = decimal_field(j, "sigma");

    std::optional<Interval> epsilon;
    if (j.contains("epsilon")) {
        const Json& e = j["epsilon"];
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
            throw ConfigError("key 'epsilon' must be a [lo, hi] pair of decimal strings");
        const Interval lo = from_decimal(e[0].get<std::string>());
        const Interval hi = from_decimal(e[1].get<std::string>());
        if (lo.lo > hi.hi) throw ConfigError("key 'epsilon': reversed endpoints");
        epsilon = Interval(lo.lo, hi.hi);
    }

    if (!j.contains("forcing") || !j["forcing"].is_object())
        throw ConfigError("missing object key 'forcing'");
    const Json& fj = j["forcing"];
    Forcing forcing;
    if (fj.contains("family")) {
        reject_unknown_keys(fj, {"family"}, "forcing");
        const std::string fam = require_string(fj, "family");
        if (fam != "A" && fam != "B")
            throw ConfigError("key 'forcing.family' must be \"A\" or \"B\"");
        if (!epsilon)
            throw ConfigError("family forcing requires the 'epsilon' key");
        forcing = family_forcing(fam == "A" ? Family::A : Family::B, *epsilon);
    } else if (fj.contains("modes")) {
        reject_unknown_keys(fj, {"modes"}, "forcing");
        if (epsilon)
            throw ConfigError(
                "key 'epsilon' is not allowed with explicit forcing modes (bounds already "
                "include eps)");
        if (!fj["modes"].is_array()) throw ConfigError("key 'forcing.modes' must be an array");
        int max_k = 0;
        std::vector<std::pair<int, Interval>> entries;
        for (const Json& m : fj["modes"]) {
            reject_unknown_keys(m, {"k", "lo", "hi"}, "forcing mode");
            if (!m.contains("k") || !m["k"].is_number_integer())
                throw ConfigError("forcing mode: missing integer key 'k'");
            const int k = m["k"].get<int>();
            if (k < 1) throw ConfigError("forcing mode: k must be >= 1");
            const Interval lo = decimal_field(m, "lo");
            const Interval hi = decimal_field(m, "hi");
            if (lo.lo > hi.hi) throw ConfigError("forcing mode: reversed endpoints");
            entries.emplace_back(k, Interval(lo.lo, hi.hi));
            max_k = std::max(max_k, k);
        }
        forcing.bounds.assign(static_cast<std::size_t>(max_k), Interval(0.0));
        for (const auto& [k, b] : entries)
            forcing.bounds[static_cast<std::size_t>(k - 1)] = b;
    } else {
        throw ConfigError("key 'forcing' must contain either 'family' or 'modes'");
    }

    if (!j.contains("M") || !j["M"].is_number_integer())
        throw ConfigError("missing integer key 'M'");
    const int M = j["M"].get<int>();
    if (M < 1) throw ConfigError("key 'M' must be >= 1");

    Problem problem = [&] {
        try {
            return Problem(beta, sigma, std::move(forcing));
        } catch (const std::domain_error& e) {
            throw ConfigError(e.what());
        }
    }();
    ParsedConfig out{std::move(problem), M, std::nullopt, RefineOptions{}};

    if (j.contains("segment")) {
        const Json& sj = j["segment"];
        reject_unknown_keys(sj, {"s", "C", "boxes"}, "segment");
        if (!sj.contains("s") || !sj["s"].is_number_integer())
            throw ConfigError("segment: missing integer key 's'");
        const Interval C = decimal_field(sj, "C");
        if (!sj.contains("boxes") || !sj["boxes"].is_array())
            throw ConfigError("segment: missing array key 'boxes'");
        std::vector<Box> boxes;
        for (const Json& bj : sj["boxes"]) {
            reject_unknown_keys(bj, {"lo", "hi"}, "segment box");
            boxes.push_back(Box{decimal_field(bj, "lo"), decimal_field(bj, "hi")});
        }
        if (boxes.size() != static_cast<std::size_t>(M))
            throw ConfigError("segment: box count must equal M");
        try {
            out.segment = Segment(M, sj["s"].get<int>(), C, std::move(boxes));
        } catch (const std::domain_error& e) {
            throw ConfigError(std::string("segment: ") + e.what());
        }
    }

    if (j.contains("refine")) {
        const Json& rj = j["refine"];
        reject_unknown_keys(
            rj, {"iterations", "c_tilde", "floor", "inflation", "guess_sweeps",
                 "guess_eps_factor"},
            "refine");
        RefineOptions& o = out.refine;
        if (rj.contains("iterations")) {
            if (!rj["iterations"].is_number_integer() || rj["iterations"].get<int>() < 1)
                throw ConfigError("refine.iterations must be a positive integer");
            o.iterations = rj["iterations"].get<int>();
        }
        if (rj.contains("c_tilde")) o.c_tilde = decimal_field(rj, "c_tilde");
        if (rj.contains("floor")) o.box_floor = midpoint(decimal_field(rj, "floor"));
        if (rj.contains("inflation")) o.inflation = midpoint(decimal_field(rj, "inflation"));
        if (rj.contains("guess_sweeps")) {
            if (!rj["guess_sweeps"].is_number_integer() || rj["guess_sweeps"].get<int>() < 0)
                throw ConfigError("refine.guess_sweeps must be a nonnegative integer");
            o.guess_sweeps = rj["guess_sweeps"].get<int>();
        }
        if (rj.contains("guess_eps_factor"))
            o.guess_eps_factor = midpoint(decimal_field(rj, "guess_eps_factor"));
    }
    return out;
}

inline ParsedConfig parse_config_text(const std::string& text) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config is not valid JSON");
    return parse_config_json(j);
}

inline ParsedConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

// ---- certificate serialization ------------------------------------------

namespace io_detail {

inline Json report_to_json(const VerificationReport& r) {
    Json enc;
    enc["n_low"] = Json::array();
    for (const Interval& n : r.enclosures.n_low) enc["n_low"].push_back(interval_to_json(n));
    enc["d1"] = interval_to_json(r.enclosures.d1);
    enc["d2"] = interval_to_json(r.enclosures.d2);
    enc["d"] = interval_to_json(r.enclosures.d);

    Json v;
    v["passed"] = r.passed;
    v["s_ok"] = r.s_ok;
    v["forcing_support_ok"] = r.forcing_support_ok;
    v["high_mode"] = Json{{"lhs", interval_to_json(r.high.lhs)},
                          {"rhs", interval_to_json(r.high.rhs)},
                          {"margin", format_double(r.high.margin)},
                          {"ok", r.high.ok}};
    v["low_modes"] = Json::array();
    for (const LowModeCheck& c : r.low)
        v["low_modes"].push_back(Json{{"k", c.k},
                                      {"rhs", interval_to_json(c.rhs)},
                                      {"upper_margin", format_double(c.upper_margin)},
                                      {"lower_margin", format_double(c.lower_margin)},
                                      {"ok", c.ok}});
    Json out;
    out["enclosures"] = std::move(enc);
    out["verification"] = std::move(v);
    return out;
}

}  // namespace io_detail

inline Json certificate_to_json(const Certificate& cert) {
    using namespace io_detail;
    Json j;
    j["schema_version"] = cert.schema_version;
    j["kind"] = "certificate";
    j["toolchain"] = Json{{"compiler", cert.toolchain.compiler},
                          {"rounding", cert.toolchain.rounding}};
    Json pj;
    pj["beta"] = interval_to_json(cert.problem.beta);
    pj["sigma"] = interval_to_json(cert.problem.sigma);
    pj["forcing"] = Json::array();
    for (const Interval& b : cert.problem.forcing.bounds)
        pj["forcing"].push_back(interval_to_json(b));
    j["problem"] = std::move(pj);

    Json sj;
    sj["M"] = cert.segment.M;
    sj["s"] = cert.segment.s;
    sj["C"] = interval_to_json(cert.segment.C);
    sj["boxes"] = Json::array();
    for (const Box& b : cert.segment.boxes)
        sj["boxes"].push_back(
            Json{{"l", interval_to_json(b.l)}, {"r", interval_to_json(b.r)}});
    j["segment"] = std::move(sj);

    const Json rep = report_to_json(cert.report);
    j["enclosures"] = rep["enclosures"];
    j["verification"] = rep["verification"];

    if (cert.has_norms) {
        const auto norms_json = [](const NormBounds& n) {
            return Json{{"l2_u", io_detail::format_double(n.l2_u.hi)},
                        {"c0_u", io_detail::format_double(n.c0_u.hi)},
                        {"l2_ut", io_detail::format_double(n.l2_ut.hi)},
                        {"c0_ut", io_detail::format_double(n.c0_ut.hi)}};
        };
        j["norms"] = Json{{"table", norms_json(cert.norms.table)},
                          {"parseval", norms_json(cert.norms.parseval)}};
        j["decay"] = Json{{"c_hat_u", format_double(cert.c_hat_u.hi)},
                          {"c_hat_v", format_double(cert.c_hat_v.hi)}};
    }
    if (cert.reference) {
        const ReferenceComparison& rc = *cert.reference;
        j["reference_comparison"] =
            Json{{"config", rc.config_name},
                 {"l2_u", Json{{"ref", format_double(rc.ref_l2_u)},
                               {"delta_pct", format_double(rc.delta_l2_u_pct)}}},
                 {"c0_u", Json{{"ref", format_double(rc.ref_c0_u)},
                               {"delta_pct", format_double(rc.delta_c0_u_pct)}}},
                 {"l2_ut", Json{{"ref", format_double(rc.ref_l2_ut)},
                                {"delta_pct", format_double(rc.delta_l2_ut_pct)}}},
                 {"c0_ut", Json{{"ref", format_double(rc.ref_c0_ut)},
                                {"delta_pct", format_double(rc.delta_c0_ut_pct)}}}};
    }
    return j;
}

inline std::string certificate_to_string(const Certificate& cert) {
    return certificate_to_json(cert).dump(2) + "\n";
}

/// Parses a certificate back into the in-memory form; round-trips
/// bit-identically with certificate_to_json.
inline Certificate certificate_from_json(const Json& j) {
    using namespace io_detail;
    if (!j.is_object() || !j.contains("kind") || j["kind"] != "certificate")
        throw ConfigError("not a certificate document");
    if (j["schema_version"].get<int>() != kSchemaVersion)
        throw ConfigError("unsupported certificate schema_version");

    Forcing forcing;
    for (const Json& b : j["problem"]["forcing"]) forcing.bounds.push_back(interval_from_json(b));
    Problem problem(interval_from_json(j["problem"]["beta"]),
                    interval_from_json(j["problem"]["sigma"]), std::move(forcing));

    const Json& sj = j["segment"];
    std::vector<Box> boxes;
    for (const Json& bj : sj["boxes"])
        boxes.push_back(Box{interval_from_json(bj["l"]), interval_from_json(bj["r"])});
    Segment segment(sj["M"].get<int>(), sj["s"].get<int>(), interval_from_json(sj["C"]),
                    std::move(boxes));

    Certificate cert{j["schema_version"].get<int>(), std::move(problem), std::move(segment),
                     VerificationReport{}};
    const Json& enc = j["enclosures"];
    for (const Json& n : enc["n_low"]) cert.report.enclosures.n_low.push_back(interval_from_json(n));
    cert.report.enclosures.d1 = interval_from_json(enc["d1"]);
    cert.report.enclosures.d2 = interval_from_json(enc["d2"]);
    cert.report.enclosures.d = interval_from_json(enc["d"]);

    const Json& v = j["verification"];
    cert.report.passed = v["passed"].get<bool>();
    cert.report.s_ok = v["s_ok"].get<bool>();
    cert.report.forcing_support_ok = v["forcing_support_ok"].get<bool>();
    cert.report.high.lhs = interval_from_json(v["high_mode"]["lhs"]);
    cert.report.high.rhs = interval_from_json(v["high_mode"]["rhs"]);
    cert.report.high.margin = parse_double_exact(v["high_mode"]["margin"].get<std::string>());
    cert.report.high.ok = v["high_mode"]["ok"].get<bool>();
    for (const Json& c : v["low_modes"]) {
        LowModeCheck lm;
        lm.k = c["k"].get<int>();
        lm.rhs = interval_from_json(c["rhs"]);
        lm.upper_margin = parse_double_exact(c["upper_margin"].get<std::string>());
        lm.lower_margin = parse_double_exact(c["lower_margin"].get<std::string>());
        lm.ok = c["ok"].get<bool>();
        cert.report.low.push_back(lm);
    }

    cert.toolchain.compiler = j["toolchain"]["compiler"].get<std::string>();
    cert.toolchain.rounding = j["toolchain"]["rounding"].get<std::string>();

    if (j.contains("norms")) {
        cert.has_norms = true;
        const auto norms_from = [](const Json& n) {
            NormBounds out;
            out.l2_u = Interval(parse_double_exact(n["l2_u"].get<std::string>()));
            out.c0_u = Interval(parse_double_exact(n["c0_u"].get<std::string>()));
            out.l2_ut = Interval(parse_double_exact(n["l2_ut"].get<std::string>()));
            out.c0_ut = Interval(parse_double_exact(n["c0_ut"].get<std::string>()));
            return out;
        };
        cert.norms.table = norms_from(j["norms"]["table"]);
        cert.norms.parseval = norms_from(j["norms"]["parseval"]);
        cert.c_hat_u = Interval(parse_double_exact(j["decay"]["c_hat_u"].get<std::string>()));
        cert.c_hat_v = Interval(parse_double_exact(j["decay"]["c_hat_v"].get<std::string>()));
    }
    if (j.contains("reference_comparison")) {
        const Json& rc = j["reference_comparison"];
        ReferenceComparison r;
        r.config_name = rc["config"].get<std::string>();
        r.ref_l2_u = parse_double_exact(rc["l2_u"]["ref"].get<std::string>());
        r.delta_l2_u_pct = parse_double_exact(rc["l2_u"]["delta_pct"].get<std::string>());
        r.ref_c0_u = parse_double_exact(rc["c0_u"]["ref"].get<std::string>());
        r.delta_c0_u_pct = parse_double_exact(rc["c0_u"]["delta_pct"].get<std::string>());
        r.ref_l2_ut = parse_double_exact(rc["l2_ut"]["ref"].get<std::string>());
        r.delta_l2_ut_pct = parse_double_exact(rc["l2_ut"]["delta_pct"].get<std::string>());
        r.ref_c0_ut = parse_double_exact(rc["c0_ut"]["ref"].get<std::string>());
        r.delta_c0_ut_pct = parse_double_exact(rc["c0_ut"]["delta_pct"].get<std::string>());
        cert.reference = std::move(r);
    }
    return cert;
}

/// CSV trajectory dump: t, u_1+, u_1-, u_2+, u_2-, ...
inline void write_trajectory_csv(std::ostream& os,
                                 const std::vector<std::pair<double, DiagPoint>>& traj) {
    if (traj.empty()) return;
    os << "t";
    for (std::size_t k = 1; k <= traj.front().second.modes(); ++k)
        os << ",u_" << k << "+,u_" << k << "-";
    os << "\n";
    for (const auto& [t, p] : traj) {
        os << io_detail::format_double(t);
        for (std::size_t i = 0; i < p.modes(); ++i)
            os << ',' << io_detail::format_double(p.plus[i]) << ','
               << io_detail::format_double(p.minus[i]);
        os << "\n";
    }
}

}  // namespace segcert
