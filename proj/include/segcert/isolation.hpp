#pragma once

#include <string>
#include <vector>

#include "segcert/interval.hpp"
#include "segcert/model.hpp"
#include "segcert/nonlinearity.hpp"
#include "segcert/segment.hpp"

namespace segcert {

/// High-mode record: the tail amplitude C against the worst-mode requirement
/// sigma*D / ((M+1) * 2(beta - (M+1)^-2)). Passing settles isolation for
/// every mode k > M in every Galerkin projection.
struct HighModeCheck {
    Interval lhs;    // tail amplitude (point interval at hi(C))
    Interval rhs;    // required strict lower bound on C
    double margin;   // lo(lhs) - hi(rhs)
    bool ok;
};

/// Low-mode record for one k <= M. rhs encloses the equilibrium response
/// -(sigma*N_k + eps f_k k^-2) / (2(beta k^2 - 1)); the box must strictly
/// straddle it.
struct LowModeCheck {
    int k;
    Interval rhs;
    double upper_margin;  // lo(r_k) - hi(rhs)
    double lower_margin;  // lo(rhs) - hi(l_k)
    bool ok;
};

struct VerificationReport {
    bool passed = false;
    bool s_ok = false;
    bool forcing_support_ok = false;
    HighModeCheck high{};
    std::vector<LowModeCheck> low;
    NEnclosures enclosures;
};

inline HighModeCheck check_high(const Segment& seg, const Problem& problem, const Interval& D) {
    const Interval m1(static_cast<double>(seg.M + 1));
    const Interval denom =
        mul(m1, mul(Interval(2.0), sub(problem.beta, div(Interval(1.0), square(m1)))));
    HighModeCheck h;
    h.rhs = div(mul(problem.sigma, D), denom);
    h.lhs = seg.c_point();
    h.ok = strictly_less(h.rhs, h.lhs);
    h.margin = h.lhs.lo - h.rhs.hi;
    return h;
}

inline std::vector<LowModeCheck> check_low(const Segment& seg, const Problem& problem,
                                           const NEnclosures& encl) {
    std::vector<LowModeCheck> out;
    out.reserve(static_cast<std::size_t>(seg.M));
    for (int k = 1; k <= seg.M; ++k) {
        const Interval k2 = square(Interval(static_cast<double>(k)));
        const Interval kinv2 = div(Interval(1.0), k2);
        const Interval num = add(encl.n_low[static_cast<std::size_t>(k - 1)],
                                 mul(problem.forcing.bound(k), kinv2));
        const Interval den =
            mul(Interval(2.0), sub(mul(problem.beta, k2), Interval(1.0)));
        LowModeCheck c;
        c.k = k;
        c.rhs = neg(div(num, den));
        const Box& b = seg.boxes[static_cast<std::size_t>(k - 1)];
        c.upper_margin = b.r.lo - c.rhs.hi;
        c.lower_margin = c.rhs.lo - b.l.hi;
        c.ok = strictly_less(c.rhs, b.r) && strictly_less(b.l, c.rhs);
        out.push_back(c);
    }
    return out;
}

/// Full isolation verification: strict segment invariants, tail exponent
/// s >= 6, forcing support confined to the explicit modes, the high-mode
/// amplitude condition, and the M low-mode inequalities. A passing report
/// certifies a periodic solution inside the segment for every period and
/// every forcing within bounds.
inline VerificationReport verify(const Segment& seg, const Problem& problem) {
    seg.validate_strict();
    VerificationReport r;
    r.enclosures = compute_enclosures(seg, problem);
    r.s_ok = seg.s >= 6;
    r.forcing_support_ok = problem.forcing.support() <= seg.M;
    r.high = check_high(seg, problem, r.enclosures.d);
    r.low = check_low(seg, problem, r.enclosures);
    bool low_ok = true;
    for (const auto& c : r.low) low_ok = low_ok && c.ok;
    r.passed = r.s_ok && r.forcing_support_ok && r.high.ok && low_ok;
    return r;
}

/// One-line human summary of why a report failed (empty when passed).
inline std::string failure_reason(const VerificationReport& r, const Segment& seg) {
    if (r.passed) return {};
    if (!r.s_ok)
        return "tail exponent s = " + std::to_string(seg.s) + " is below the required minimum 6";
    if (!r.forcing_support_ok)
        return "forcing has a nonzero mode above M = " + std::to_string(seg.M) +
               "; the high-mode lemma requires f_k = 0 for k > M";
    if (!r.high.ok) return "high-mode amplitude condition on C failed";
    for (const auto& c : r.low)
        if (!c.ok) return "low-mode isolation inequality failed at mode " + std::to_string(c.k);
    return "verification failed";
}

}  // namespace segcert
