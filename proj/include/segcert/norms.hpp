#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "segcert/interval.hpp"
#include "segcert/isolation.hpp"
#include "segcert/model.hpp"
#include "segcert/segment.hpp"

namespace segcert {

/// Number of tail amplitudes summed explicitly before switching to the
/// integral remainder; at s = 6 the remainder is below 1e-9 relative.
constexpr int kNormTailTerms = 64;

/// Upper bound on |v_k| = |lambda_k (u_k^+ - u_k^-)|: 2 lambda_k max(|l|,|r|)
/// for k <= M, 2 lambda_k C/k^s beyond.
inline Interval velocity_bound(const Segment& seg, const Problem& problem, int k) {
    if (k < 1) throw std::domain_error("velocity_bound: mode index must be >= 1");
    const Interval lam = lambda_k(k, problem.beta);
    if (k <= seg.M) {
        const Box& b = seg.boxes[static_cast<std::size_t>(k - 1)];
        return mul(mul(Interval(2.0), lam), Interval(std::max(mag(b.l), mag(b.r))));
    }
    return div(mul(mul(Interval(2.0), lam), seg.c_point()),
               pow_int(Interval(static_cast<double>(k)), seg.s));
}

namespace detail {

inline void require_tail_power(int q, const char* what) {
    if (q < 2)
        throw std::domain_error(std::string(what) + ": tail exponent below 2, sum may diverge");
}

// sum_{k > K} (A/k^q)^p bound by the integral remainder A^p / ((pq-1) K^(pq-1)).
inline Interval integral_remainder(const Interval& A, int q, int p, int K) {
    const Interval Ap = (p == 2) ? square(A) : A;
    const int e = p * q - 1;
    return div(Ap, mul(Interval(static_cast<double>(e)), pow_int(Interval(static_cast<double>(K)), e)));
}

}  // namespace detail

/// Table-convention L2 bound sqrt(2 pi sum_k amp_k^2): explicit amplitudes
/// for k = 1..amps.size(), then amp_k <= tail_coef/k^tail_power with the
/// integral remainder.
inline Interval l2_bound(std::span<const Interval> amps, const Interval& tail_coef,
                         int tail_power) {
    detail::require_tail_power(tail_power, "l2_bound");
    Interval sumsq(0.0);
    for (const Interval& a : amps) sumsq = add(sumsq, square(a));
    sumsq = add(sumsq, detail::integral_remainder(tail_coef, tail_power, 2,
                                                  static_cast<int>(amps.size())));
    return sqrt(mul(two_pi(), sumsq));
}

/// Sup-norm bound sum_k amp_k by absolute summability, same head/remainder
/// split as l2_bound.
inline Interval c0_bound(std::span<const Interval> amps, const Interval& tail_coef,
                         int tail_power) {
    detail::require_tail_power(tail_power, "c0_bound");
    Interval sum(0.0);
    for (const Interval& a : amps) sum = add(sum, a);
    return add(sum, detail::integral_remainder(tail_coef, tail_power, 1,
                                               static_cast<int>(amps.size())));
}

inline std::vector<Interval> u_amplitudes(const Segment& seg) {
    std::vector<Interval> amps;
    const int K = seg.M + kNormTailTerms;
    amps.reserve(static_cast<std::size_t>(K));
    for (int k = 1; k <= K; ++k) amps.push_back(abs_u(seg, k));
    return amps;
}

inline std::vector<Interval> ut_amplitudes(const Segment& seg, const Problem& problem) {
    std::vector<Interval> amps;
    const int K = seg.M + kNormTailTerms;
    amps.reserve(static_cast<std::size_t>(K));
    for (int k = 1; k <= K; ++k) amps.push_back(velocity_bound(seg, problem, k));
    return amps;
}

/// Upper bounds on sup_t of the L2 and C0 norms of u and u_t.
struct NormBounds {
    Interval l2_u;
    Interval c0_u;
    Interval l2_ut;
    Interval c0_ut;
};

/// Both conventions. "table" treats the solution as the one-sided sum
/// sum_{k>=1} u_k e^{ikx} (the convention the published tables follow);
/// "parseval" is the bound for the two-sided real solution: L2 grows by
/// sqrt(2), C0 by 2.
struct NormBoundsPair {
    NormBounds table;
    NormBounds parseval;
};

inline NormBoundsPair norm_bounds(const Segment& seg, const Problem& problem) {
    if (seg.s < 4)
        throw std::domain_error("norm_bounds: velocity sums need tail exponent s >= 4");
    const auto ua = u_amplitudes(seg);
    const auto va = ut_amplitudes(seg, problem);
    const Interval two_c = mul(Interval(2.0), seg.c_point());
    const Interval two_sqrt_beta_c = mul(two_c, sqrt(problem.beta));

    NormBoundsPair nb;
    nb.table.l2_u = l2_bound(ua, two_c, seg.s);
    nb.table.c0_u = c0_bound(ua, two_c, seg.s);
    nb.table.l2_ut = l2_bound(va, two_sqrt_beta_c, seg.s - 2);
    nb.table.c0_ut = c0_bound(va, two_sqrt_beta_c, seg.s - 2);

    const Interval sqrt2 = sqrt(Interval(2.0));
    nb.parseval.l2_u = mul(nb.table.l2_u, sqrt2);
    nb.parseval.l2_ut = mul(nb.table.l2_ut, sqrt2);
    nb.parseval.c0_u = mul(nb.table.c0_u, Interval(2.0));
    nb.parseval.c0_ut = mul(nb.table.c0_ut, Interval(2.0));
    return nb;
}

/// Decay constants of the certified solution: |u_k| <= C_u/k^6 and
/// |v_k| <= C_v/k^4 for all k. Tied to s = 6.
inline std::pair<Interval, Interval> decay_constants(const Segment& seg, const Problem& problem) {
    if (seg.s != 6)
        throw std::domain_error("decay_constants: statement requires tail exponent s = 6");
    Interval cu = mul(Interval(2.0), seg.c_point());
    Interval cv = Interval(mul(mul(Interval(2.0), sqrt(problem.beta)), seg.c_point()).hi);
    for (int k = 1; k <= seg.M; ++k) {
        cu = imax(cu, mul(pow_int(Interval(static_cast<double>(k)), 6), abs_u(seg, k)));
        cv = imax(cv, mul(pow_int(Interval(static_cast<double>(k)), 4),
                          velocity_bound(seg, problem, k)));
    }
    return {cu, cv};
}

/// Deltas of the computed table-convention bounds against previously
/// published values, attached when a run matches a built-in configuration.
struct ReferenceComparison {
    std::string config_name;
    double ref_l2_u, ref_c0_u, ref_l2_ut, ref_c0_ut;
    double delta_l2_u_pct, delta_c0_u_pct, delta_l2_ut_pct, delta_c0_ut_pct;
};

struct ToolchainInfo {
    std::string compiler = __VERSION__;
    std::string rounding = "outward, nextafter-adjusted error-free transforms";
};

/// Machine-readable certification record. Norm bounds and decay constants
/// are attached only when the verification passed.
struct Certificate {
    int schema_version = 1;
    Problem problem;
    Segment segment;
    VerificationReport report;
    bool has_norms = false;
    NormBoundsPair norms{};
    Interval c_hat_u{};
    Interval c_hat_v{};
    ToolchainInfo toolchain{};
    std::optional<ReferenceComparison> reference;
};

inline Certificate build_certificate(const Problem& problem, const Segment& seg) {
    Certificate cert{1, problem, seg, verify(seg, problem)};
    if (cert.report.passed) {
        cert.has_norms = true;
        cert.norms = norm_bounds(seg, problem);
        auto [cu, cv] = decay_constants(seg, problem);
        cert.c_hat_u = cu;
        cert.c_hat_v = cv;
    }
    return cert;
}

}  // namespace segcert
