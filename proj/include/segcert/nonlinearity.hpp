#pragma once

#include <stdexcept>
#include <vector>

#include "segcert/interval.hpp"
#include "segcert/model.hpp"
#include "segcert/segment.hpp"

namespace segcert {

namespace detail {

inline Interval ipow(int base, int p) {
    return pow_int(Interval(static_cast<double>(base)), p);
}

inline Interval symmetric(const Interval& bound) {
    // [-hi, hi] from a nonnegative bound
    return {-bound.hi, bound.hi};
}

}  // namespace detail

/// Enclosure of the infinite sum IS(k) = sum_{k1>=1} u_{k1+k} u_{k1} over the
/// segment, for an explicit mode k <= M. Head sum in intervals; partners that
/// fall into the tail contribute |u_{k1}| 2C/(k+k1)^s; the pure-tail remainder
/// is 4C^2 / ((k+M+1)^s (s-1) M^(s-1)).
inline Interval is_low(const Segment& seg, int k) {
    if (k < 1 || k > seg.M) throw std::domain_error("is_low: mode index out of range");
    const int M = seg.M, s = seg.s;
    const Interval c = seg.c_point();

    Interval head(0.0);
    for (int k1 = 1; k1 <= M - k; ++k1)
        head = add(head, mul(u_box(seg, k1 + k), u_box(seg, k1)));

    Interval mid_sum(0.0);
    for (int k1 = M - k + 1; k1 <= M; ++k1)
        mid_sum = add(mid_sum, div(abs_u(seg, k1), detail::ipow(k + k1, s)));
    const Interval mid = mul(mul(Interval(2.0), c), mid_sum);

    const Interval tail_den =
        mul(detail::ipow(k + M + 1, s),
            mul(Interval(static_cast<double>(s - 1)), detail::ipow(M, s - 1)));
    const Interval tail = div(mul(Interval(4.0), square(c)), tail_den);

    return add(head, add(detail::symmetric(mid), detail::symmetric(tail)));
}

/// Interval evaluation of the finite sum FS(k) = sum_{k1=1}^{k-1} u_{k1} u_{k-k1}
/// for 2 <= k <= 2M, with tail boxes for indices above M. The diagonal term of
/// even k uses the dependent square.
inline Interval fs_exact(const Segment& seg, int k) {
    if (k < 2 || k > 2 * seg.M) throw std::domain_error("fs_exact: mode index out of range");
    Interval acc(0.0);
    for (int k1 = 1; k1 < k; ++k1) {
        const int k2 = k - k1;
        if (k1 == k2)
            acc = add(acc, square(u_box(seg, k1)));
        else
            acc = add(acc, mul(u_box(seg, k1), u_box(seg, k2)));
    }
    return acc;
}

/// D1 with |FS(k)| <= D1/k^(s-1) for all k > M: exact interval sums carry the
/// band M < k <= 2M, the closed-form bound covers k > 2M.
inline Interval d1(const Segment& seg) {
    const int M = seg.M, s = seg.s;
    const Interval c = seg.c_point();

    Interval band(0.0);
    for (int k = M + 1; k <= 2 * M; ++k) {
        const Interval cand = mul(detail::ipow(k, s - 1), Interval(mag(fs_exact(seg, k))));
        band = imax(band, cand);
    }

    const Interval su = sum_abs_u_low(seg);
    const Interval t1 = div(mul(pow_int(Interval(2.0), s + 1), su),
                            Interval(static_cast<double>(2 * M + 1)));
    const Interval t2 = div(mul(c, pow_int(Interval(2.0), 2 * s + 1)),
                            detail::ipow(2 * M + 1, s + 1));
    const Interval t3 = div(mul(c, pow_int(Interval(2.0), s + 1)),
                            mul(Interval(static_cast<double>(s - 1)), detail::ipow(M, s)));
    const Interval beyond = mul(mul(Interval(2.0), c), add(t1, add(t2, t3)));

    return imax(band, beyond);
}

/// D2 with |IS(k)| <= D2/k^(s-1) for all k > M.
inline Interval d2(const Segment& seg) {
    const int M = seg.M, s = seg.s;
    const Interval c = seg.c_point();
    const Interval inner =
        add(div(mul(Interval(2.0), c),
                mul(detail::ipow(M + 1, s - 1), Interval(static_cast<double>(s - 1)))),
            sum_abs_u_low(seg));
    return mul(div(mul(Interval(2.0), c), Interval(static_cast<double>(M + 1))), inner);
}

/// D = D1 + 2 D2, the tail constant with |N_k| <= D/k^(s-1) for k > M.
inline Interval d_total(const Segment& seg) {
    return add(d1(seg), mul(Interval(2.0), d2(seg)));
}

/// Enclosure of sigma*N_k = sigma*(-2 IS(k) - FS(k)) over the whole segment,
/// for an explicit mode k <= M.
inline Interval n_low(const Segment& seg, const Interval& sigma, int k) {
    if (k < 1 || k > seg.M) throw std::domain_error("n_low: mode index out of range");
    const Interval fs = (k >= 2) ? fs_exact(seg, k) : Interval(0.0);
    const Interval n = sub(mul(Interval(-2.0), is_low(seg, k)), fs);
    return mul(sigma, n);
}

/// All nonlinearity enclosures needed by the isolation checks.
struct NEnclosures {
    std::vector<Interval> n_low;  // sigma*N_k for k = 1..M
    Interval d1;
    Interval d2;
    Interval d;
};

inline NEnclosures compute_enclosures(const Segment& seg, const Problem& problem) {
    NEnclosures e;
    e.n_low.reserve(static_cast<std::size_t>(seg.M));
    for (int k = 1; k <= seg.M; ++k) e.n_low.push_back(n_low(seg, problem.sigma, k));
    e.d1 = d1(seg);
    e.d2 = d2(seg);
    e.d = add(e.d1, mul(Interval(2.0), e.d2));
    return e;
}

}  // namespace segcert
