#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "segcert/interval.hpp"
#include "segcert/model.hpp"
#include "segcert/segment.hpp"

namespace segcert {

/// A concrete time-periodic forcing realization for the float sandbox:
/// per-mode shape functions f_k(t) with |f_k(t)| <= 1 and period tau.
/// The realized forcing term is eps * f_k(t).
struct ForcingInstance {
    double tau = 1.0;
    std::vector<std::function<double(double)>> modes;

    double eval(int k, double t) const {
        const auto i = static_cast<std::size_t>(k - 1);
        return (k >= 1 && i < modes.size()) ? modes[i](t) : 0.0;
    }

    /// Plain cosine shapes f_k(t) = cos(2 pi t / tau) on the first `count`
    /// modes.
    static ForcingInstance cosine(int count, double tau) {
        ForcingInstance inst;
        inst.tau = tau;
        const double omega = 2.0 * std::numbers::pi / tau;
        for (int k = 0; k < count; ++k)
            inst.modes.emplace_back([omega](double t) { return std::cos(omega * t); });
        return inst;
    }

    /// Shapes matched to a problem's bounds: with eps = suggested_eps(problem),
    /// eps * f_k(t) sweeps mid_k + rad_k cos(2 pi t/tau), staying inside the
    /// k-th bound for all t (symmetric bounds reduce to eps_bar * cos).
    static ForcingInstance from_problem(const Problem& problem, double tau) {
        ForcingInstance inst;
        inst.tau = tau;
        const double eps = suggested_eps(problem);
        const double omega = 2.0 * std::numbers::pi / tau;
        for (std::size_t i = 0; i < problem.forcing.bounds.size(); ++i) {
            const Interval b = problem.forcing.bounds[i];
            const double mid = midpoint(b);
            const double rad = 0.5 * width(b);
            if (eps == 0.0) {
                inst.modes.emplace_back([](double) { return 0.0; });
            } else {
                inst.modes.emplace_back([mid, rad, omega, eps](double t) {
                    return (mid + rad * std::cos(omega * t)) / eps;
                });
            }
        }
        return inst;
    }

    static double suggested_eps(const Problem& problem) {
        double e = 0.0;
        for (const Interval& b : problem.forcing.bounds) e = std::max(e, mag(b));
        return e;
    }
};

/// Truncated convolution N_{k,n}(u) = -2 sum_{k1=1}^{n-k} u_{k1+k} u_{k1}
///                                    - sum_{k1=1}^{k-1} u_{k1} u_{k-k1}
/// on physical coefficients u_j (1-based in `u[j-1]`).
inline double convolution_nkn(const std::vector<double>& u, int k, int n) {
    double tail = 0.0;
    for (int k1 = 1; k1 <= n - k; ++k1)
        tail += u[static_cast<std::size_t>(k1 + k - 1)] * u[static_cast<std::size_t>(k1 - 1)];
    double fin = 0.0;
    for (int k1 = 1; k1 < k; ++k1)
        fin += u[static_cast<std::size_t>(k1 - 1)] * u[static_cast<std::size_t>(k - k1 - 1)];
    return -2.0 * tail - fin;
}

/// Right-hand side of the n-th Galerkin projection in diagonalized
/// coordinates. Plain double arithmetic: diagnostics and testing only.
inline DiagPoint vector_field(double t, const DiagPoint& point, int n, const Problem& problem,
                              double eps, const ForcingInstance& instance) {
    if (point.modes() != static_cast<std::size_t>(n))
        throw std::invalid_argument("vector_field: point has wrong mode count");
    const double beta = midpoint(problem.beta);
    const double sigma = midpoint(problem.sigma);

    std::vector<double> u(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        const auto i = static_cast<std::size_t>(k - 1);
        u[i] = point.plus[i] + point.minus[i];
    }

    DiagPoint d(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        const auto i = static_cast<std::size_t>(k - 1);
        const double kk = static_cast<double>(k) * k;
        const double lam = std::sqrt(kk * (beta * kk - 1.0));
        const double nk = convolution_nkn(u, k, n);
        const double drive = (sigma * kk * nk + eps * instance.eval(k, t)) / (2.0 * lam);
        d.plus[i] = lam * point.plus[i] + drive;
        d.minus[i] = -lam * point.minus[i] - drive;
    }
    return d;
}

/// Classical RK4 trajectory. No rigor claims; high-mode blow-up simply
/// shows up as non-finite values in the output.
inline std::vector<std::pair<double, DiagPoint>> rk4_integrate(
    const DiagPoint& start, double t0, double t1, int steps, int n, const Problem& problem,
    double eps, const ForcingInstance& instance) {
    if (steps < 1) throw std::invalid_argument("rk4_integrate: steps must be >= 1");
    const double h = (t1 - t0) / steps;
    std::vector<std::pair<double, DiagPoint>> out;
    out.reserve(static_cast<std::size_t>(steps) + 1);
    DiagPoint y = start;
    out.emplace_back(t0, y);
    const auto axpy = [n](const DiagPoint& a, double c, const DiagPoint& b) {
        DiagPoint r(static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < r.plus.size(); ++i) {
            r.plus[i] = a.plus[i] + c * b.plus[i];
            r.minus[i] = a.minus[i] + c * b.minus[i];
        }
        return r;
    };
    for (int i = 0; i < steps; ++i) {
        const double t = t0 + i * h;
        const DiagPoint k1 = vector_field(t, y, n, problem, eps, instance);
        const DiagPoint k2 = vector_field(t + 0.5 * h, axpy(y, 0.5 * h, k1), n, problem, eps, instance);
        const DiagPoint k3 = vector_field(t + 0.5 * h, axpy(y, 0.5 * h, k2), n, problem, eps, instance);
        const DiagPoint k4 = vector_field(t + h, axpy(y, h, k3), n, problem, eps, instance);
        for (std::size_t j = 0; j < y.plus.size(); ++j) {
            y.plus[j] += h / 6.0 * (k1.plus[j] + 2 * k2.plus[j] + 2 * k3.plus[j] + k4.plus[j]);
            y.minus[j] += h / 6.0 * (k1.minus[j] + 2 * k2.minus[j] + 2 * k3.minus[j] + k4.minus[j]);
        }
        out.emplace_back(t0 + (i + 1) * h, y);
    }
    return out;
}

/// Face families of the box segment, following the sign pattern of the
/// isolation inequalities: exit faces are the u+ extremes, entry faces the
/// u- extremes. margin > 0 means the field points the certified way.
enum class Face : int { PlusTop = 0, PlusBottom = 1, MinusTop = 2, MinusBottom = 3 };

struct FaceMargins {
    int k;
    double margin[4];  // indexed by Face
};

struct BoundarySampleReport {
    std::vector<FaceMargins> faces;  // per mode k = 1..n
    double worst = 0.0;
    int worst_k = 0;
    Face worst_face = Face::PlusTop;
    std::uint64_t seed = 0;
    int samples_per_face = 0;

    bool all_positive() const { return worst > 0.0; }
};

/// Samples random points on every face of the n-mode projected segment and
/// random times in one period, evaluating the float vector field. A passing
/// rigorous verification predicts strictly positive margins here; any
/// negative margin after a passing verify is a hard bug.
inline BoundarySampleReport boundary_sample(const Segment& seg, int n, const Problem& problem,
                                            int samples, const ForcingInstance& instance,
                                            double eps, std::uint64_t seed) {
    if (n < seg.M) throw std::invalid_argument("boundary_sample: n must be >= M");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const auto lo_of = [&](int k) {
        return k <= seg.M ? seg.boxes[static_cast<std::size_t>(k - 1)].l.lo
                          : -div(seg.c_point(), pow_int(Interval(static_cast<double>(k)), seg.s)).hi;
    };
    const auto hi_of = [&](int k) {
        return k <= seg.M ? seg.boxes[static_cast<std::size_t>(k - 1)].r.hi
                          : div(seg.c_point(), pow_int(Interval(static_cast<double>(k)), seg.s)).hi;
    };

    BoundarySampleReport rep;
    rep.seed = seed;
    rep.samples_per_face = samples;
    rep.worst = std::numeric_limits<double>::infinity();

    for (int k = 1; k <= n; ++k) {
        FaceMargins fm;
        fm.k = k;
        for (int f = 0; f < 4; ++f) fm.margin[f] = std::numeric_limits<double>::infinity();

        for (int f = 0; f < 4; ++f) {
            for (int sidx = 0; sidx < samples; ++sidx) {
                DiagPoint p(static_cast<std::size_t>(n));
                for (int j = 1; j <= n; ++j) {
                    const double l = lo_of(j), h = hi_of(j);
                    const auto i = static_cast<std::size_t>(j - 1);
                    p.plus[i] = l + (h - l) * unit(rng);
                    p.minus[i] = l + (h - l) * unit(rng);
                }
                const auto i = static_cast<std::size_t>(k - 1);
                switch (static_cast<Face>(f)) {
                    case Face::PlusTop: p.plus[i] = hi_of(k); break;
                    case Face::PlusBottom: p.plus[i] = lo_of(k); break;
                    case Face::MinusTop: p.minus[i] = hi_of(k); break;
                    case Face::MinusBottom: p.minus[i] = lo_of(k); break;
                }
                const double t = instance.tau * unit(rng);
                const DiagPoint d = vector_field(t, p, n, problem, eps, instance);
                double m = 0.0;
                switch (static_cast<Face>(f)) {
                    case Face::PlusTop: m = d.plus[i]; break;      // want du+ > 0
                    case Face::PlusBottom: m = -d.plus[i]; break;  // want du+ < 0
                    case Face::MinusTop: m = -d.minus[i]; break;   // want du- < 0
                    case Face::MinusBottom: m = d.minus[i]; break; // want du- > 0
                }
                fm.margin[f] = std::min(fm.margin[f], m);
            }
            if (fm.margin[f] < rep.worst) {
                rep.worst = fm.margin[f];
                rep.worst_k = k;
                rep.worst_face = static_cast<Face>(f);
            }
        }
        rep.faces.push_back(fm);
    }
    return rep;
}

inline const char* face_name(Face f) {
    switch (f) {
        case Face::PlusTop: return "u+ top";
        case Face::PlusBottom: return "u+ bottom";
        case Face::MinusTop: return "u- top";
        case Face::MinusBottom: return "u- bottom";
    }
    return "?";
}

}  // namespace segcert
