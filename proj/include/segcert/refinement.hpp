#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "segcert/interval.hpp"
#include "segcert/isolation.hpp"
#include "segcert/model.hpp"
#include "segcert/nonlinearity.hpp"
#include "segcert/segment.hpp"

namespace segcert {

/// Refinement controls. iterations/c_tilde/floor/inflation follow the
/// two-step procedure; guess_sweeps and guess_eps_factor condition the
/// initial guess: a few in-place box-consistency sweeps at the initial
/// (s = 4, C = c_tilde) state with forcing inflated by guess_eps_factor.
/// With a factor > 1 the swept state dominates the true update map
/// (the map is componentwise monotone), so the refine iterates descend
/// and the strict inequalities end up holding with margin.
struct RefineOptions {
    int iterations = 2;
    Interval c_tilde = Interval(1.0);
    double box_floor = 1e-8;
    double inflation = 1.001;
    int guess_sweeps = 8;
    double guess_eps_factor = 1.2;
};

namespace detail {

constexpr double kBoxCap = 1e100;

inline double clamp_endpoint(double v) {
    if (std::isnan(v)) return 0.0;
    return std::clamp(v, -kBoxCap, kBoxCap);
}

// Heuristic output may land anywhere; keep boxes finite and nonempty so
// the posterior verification fails honestly instead of overflowing.
inline Box sanitize_box(double l, double r, double floor_half_width) {
    l = clamp_endpoint(l);
    r = clamp_endpoint(r);
    if (!(l < r)) {
        const double h = std::max(std::max(std::fabs(l), std::fabs(r)), floor_half_width);
        l = -h;
        r = h;
    }
    return Box{Interval(l), Interval(r)};
}

inline Interval sanitize_amplitude(const Interval& c) {
    double hi = clamp_endpoint(c.hi);
    double lo = std::clamp(clamp_endpoint(c.lo), 1e-300, kBoxCap);
    if (hi < lo) hi = lo;
    return {lo, hi};
}

// New box from the low-mode equilibrium response on the current segment
// state, with forcing bounds scaled by eps_factor.
inline std::pair<double, double> box_update(const Segment& seg, const Problem& problem, int k,
                                            double eps_factor) {
    const Interval n = n_low(seg, problem.sigma, k);
    const Interval f = mul(problem.forcing.bound(k), Interval(eps_factor));
    const Interval k2 = square(Interval(static_cast<double>(k)));
    const Interval kinv2 = div(Interval(1.0), k2);
    const Interval den = mul(Interval(2.0), sub(mul(problem.beta, k2), Interval(1.0)));
    const Interval r_iv = neg(div(add(Interval(n.lo), mul(Interval(f.lo), kinv2)), den));
    const Interval l_iv = neg(div(add(Interval(n.hi), mul(Interval(f.hi), kinv2)), den));
    return {l_iv.lo, r_iv.hi};
}

}  // namespace detail

/// Linear-response starting segment: s = 4, C = c_tilde, and symmetric boxes
/// r_k = -l_k = max(mag(f_k) / (2 (beta k^2 - 1)), floor).
inline Segment initial_guess(const Problem& problem, int M, const Interval& c_tilde,
                             double box_floor) {
    if (M < 1) throw std::invalid_argument("initial_guess: M must be >= 1");
    std::vector<Box> boxes;
    boxes.reserve(static_cast<std::size_t>(M));
    for (int k = 1; k <= M; ++k) {
        const Interval k2 = square(Interval(static_cast<double>(k)));
        const double den_lo = sub(mul(problem.beta, k2), Interval(1.0)).lo;
        const double kk = static_cast<double>(k) * static_cast<double>(k);
        const double resp = mag(problem.forcing.bound(k)) / (2.0 * kk * den_lo) * kk;
        const double r = std::max(resp, box_floor);
        boxes.push_back(Box{Interval(-r), Interval(r)});
    }
    return Segment(M, 4, c_tilde, std::move(boxes));
}

/// One box-consistency sweep in place: each mode's box is replaced by its
/// equilibrium response on the current (partially updated) state. s and C
/// are untouched.
inline Segment box_sweep(Segment seg, const Problem& problem, double eps_factor,
                         double box_floor) {
    for (int k = 1; k <= seg.M; ++k) {
        const auto [l, r] = detail::box_update(seg, problem, k, eps_factor);
        seg.boxes[static_cast<std::size_t>(k - 1)] = detail::sanitize_box(l, r, box_floor);
    }
    return seg;
}

/// The two-step refinement: s := s+1 and C := |sigma| D / (2(beta-(M+1)^-2))
/// with D taken from the input segment, then the boxes are retightened
/// inductively for k = 1..M on the partially updated segment and inflated
/// outward so the posterior strict inequalities can hold with margin.
inline Segment refine_step(const Segment& seg, const Problem& problem,
                           const RefineOptions& opts = {}) {
    const Interval D = d_total(seg);
    const Interval m1(static_cast<double>(seg.M + 1));
    const Interval den = mul(Interval(2.0), sub(problem.beta, div(Interval(1.0), square(m1))));
    const Interval c_new =
        detail::sanitize_amplitude(div(mul(Interval(mag(problem.sigma)), D), den));

    Segment cur(seg.M, seg.s + 1, c_new, seg.boxes);
    for (int k = 1; k <= cur.M; ++k) {
        const auto [l, r] = detail::box_update(cur, problem, k, 1.0);
        const double mid = 0.5 * (l + r);
        const double half = 0.5 * (r - l) * opts.inflation;
        cur.boxes[static_cast<std::size_t>(k - 1)] =
            detail::sanitize_box(mid - half, mid + half, opts.box_floor);
    }
    return cur;
}

/// Full pipeline: initial guess, conditioning sweeps, `iterations` refine
/// steps, posterior verification.
inline std::pair<Segment, VerificationReport> refine(const Problem& problem, int M,
                                                     const RefineOptions& opts = {}) {
    if (opts.iterations < 1)
        throw std::invalid_argument("refine: iterations must be >= 1");
    Segment seg = initial_guess(problem, M, opts.c_tilde, opts.box_floor);
    for (int i = 0; i < opts.guess_sweeps; ++i)
        seg = box_sweep(std::move(seg), problem, opts.guess_eps_factor, opts.box_floor);
    for (int i = 0; i < opts.iterations; ++i) seg = refine_step(seg, problem, opts);
    VerificationReport report = verify(seg, problem);
    return {std::move(seg), std::move(report)};
}

/// Proportional rescaling of boxes and C for a new forcing magnitude;
/// yields a starting guess, not a certificate.
inline Segment rescale_for_epsilon(const Segment& seg, double old_eps_mag, double new_eps_mag) {
    if (!(old_eps_mag > 0.0))
        throw std::domain_error("rescale_for_epsilon: old magnitude must be positive");
    const Interval ratio = div(Interval(new_eps_mag), Interval(old_eps_mag));
    std::vector<Box> boxes;
    boxes.reserve(seg.boxes.size());
    for (const auto& b : seg.boxes)
        boxes.push_back(Box{mul(b.l, ratio), mul(b.r, ratio)});
    return Segment(seg.M, seg.s, mul(seg.C, ratio), std::move(boxes));
}

}  // namespace segcert
