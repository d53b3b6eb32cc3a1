#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "segcert/interval.hpp"

namespace segcert {

/// One low-mode coordinate box [l, r]. Both endpoints are intervals so that
/// decimal inputs keep their outward enclosures; the box shared by u_k^+ and
/// u_k^- is the widest reading [lo(l), hi(r)].
struct Box {
    Interval l;
    Interval r;
};

/// Candidate isolating segment: M explicit boxes plus the power-law tail
/// |u_k^+-| <= C/k^s for k > M. The tail amplitude used in every bound is
/// the conservative hi(C).
///
/// Construction accepts degenerate data (closed boxes, C = 0) so limits like
/// the zero segment remain expressible; verification enforces the strict
/// form via validate_strict().
struct Segment {
    int M;
    int s;
    Interval C;
    std::vector<Box> boxes;

    Segment(int M_, int s_, Interval C_, std::vector<Box> boxes_)
        : M(M_), s(s_), C(C_), boxes(std::move(boxes_)) {
        if (M < 1) throw std::domain_error("segment: M must be >= 1");
        if (boxes.size() != static_cast<std::size_t>(M))
            throw std::domain_error("segment: box count must equal M");
        if (s < 2) throw std::domain_error("segment: tail exponent s must be >= 2");
        if (C.lo < 0.0) throw std::domain_error("segment: tail amplitude C must be >= 0");
        for (const auto& b : boxes)
            if (b.l.hi > b.r.lo)
                throw std::domain_error("segment: box with l > r");
    }

    /// Tail amplitude as a point interval (hi endpoint, conservative).
    Interval c_point() const { return Interval(C.hi); }

    /// Strict invariants required for certification: open nonempty boxes and
    /// a positive tail amplitude. Throws std::domain_error naming the defect.
    void validate_strict() const {
        if (!(C.lo > 0.0))
            throw std::domain_error("segment: tail amplitude C must be positive");
        for (std::size_t i = 0; i < boxes.size(); ++i)
            if (!(boxes[i].l.hi < boxes[i].r.lo))
                throw std::domain_error("segment: empty box at mode " + std::to_string(i + 1));
    }
};

/// Physical-coefficient bound: u_k = u_k^+ + u_k^- lies in [2 lo(l_k), 2 hi(r_k)]
/// for k <= M and in [-2C/k^s, 2C/k^s] beyond.
inline Interval u_box(const Segment& seg, int k) {
    if (k < 1) throw std::domain_error("u_box: mode index must be >= 1");
    if (k <= seg.M) {
        const Box& b = seg.boxes[static_cast<std::size_t>(k - 1)];
        return {2.0 * b.l.lo, 2.0 * b.r.hi};  // doubling is exact
    }
    const Interval t = div(mul(Interval(2.0), seg.c_point()),
                           pow_int(Interval(static_cast<double>(k)), seg.s));
    return {-t.hi, t.hi};
}

/// Scalar amplitude bound |u_k| := 2 max(|l_k|, |r_k|) for k <= M, 2C/k^s
/// beyond (upper endpoint is the usable bound).
inline Interval abs_u(const Segment& seg, int k) {
    if (k < 1) throw std::domain_error("abs_u: mode index must be >= 1");
    if (k <= seg.M) {
        const Box& b = seg.boxes[static_cast<std::size_t>(k - 1)];
        return Interval(2.0 * std::max(mag(b.l), mag(b.r)));
    }
    return div(mul(Interval(2.0), seg.c_point()),
               pow_int(Interval(static_cast<double>(k)), seg.s));
}

/// Sum of |u_k| over the explicit modes k = 1..M.
inline Interval sum_abs_u_low(const Segment& seg) {
    Interval acc(0.0);
    for (int k = 1; k <= seg.M; ++k) acc = add(acc, abs_u(seg, k));
    return acc;
}

}  // namespace segcert
