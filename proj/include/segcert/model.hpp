#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "segcert/interval.hpp"

namespace segcert {

/// Forcing family of the driven problem: one cosine mode (A) or four (B).
enum class Family { A, B };

/// Uniform-in-time interval bounds on the forced Fourier modes. bounds[k-1]
/// encloses eps*f_k(t) for all t; modes beyond the stored count are zero.
/// Time itself never enters the verification: certificates hold for every
/// period tau > 0 and every forcing within these bounds.
struct Forcing {
    std::vector<Interval> bounds;

    std::size_t mode_count() const { return bounds.size(); }

    Interval bound(int k) const {
        if (k < 1) throw std::domain_error("forcing bound: mode index must be >= 1");
        const auto i = static_cast<std::size_t>(k - 1);
        return i < bounds.size() ? bounds[i] : Interval(0.0);
    }

    /// Highest mode with a bound other than [0,0].
    int support() const {
        for (std::size_t i = bounds.size(); i-- > 0;)
            if (!(bounds[i].lo == 0.0 && bounds[i].hi == 0.0))
                return static_cast<int>(i + 1);
        return 0;
    }
};

/// Family A: eps*f_1 in [-mag(eps), mag(eps)] at mode 1 only.
/// Family B: the same bound at modes 1..4.
inline Forcing family_forcing(Family family, const Interval& eps) {
    const double e = mag(eps);
    const Interval b(-e, e);
    Forcing f;
    f.bounds.assign(family == Family::A ? 1 : 4, b);
    return f;
}

/// The diagonalized problem data: u_tt = u_xx + beta u_xxxx + sigma (u^2)_xx
/// plus forcing, with beta > 1 so every linear block has a real hyperbolic
/// splitting.
struct Problem {
    Interval beta;
    Interval sigma;
    Forcing forcing;

    Problem(Interval beta_, Interval sigma_, Forcing forcing_)
        : beta(beta_), sigma(sigma_), forcing(std::move(forcing_)) {
        if (!(beta.lo > 1.0))
            throw std::domain_error("problem: beta must satisfy lo(beta) > 1");
    }
};

/// lambda_k^2 = k^2 (beta k^2 - 1); strictly positive for beta > 1.
inline Interval lambda_sq(int k, const Interval& beta) {
    if (k < 1) throw std::domain_error("lambda_sq: mode index must be >= 1");
    const Interval k2 = square(Interval(static_cast<double>(k)));
    return mul(k2, sub(mul(beta, k2), Interval(1.0)));
}

/// lambda_k = sqrt(k^2 (beta k^2 - 1)), the growth rate of the k-th block.
inline Interval lambda_k(int k, const Interval& beta) {
    return sqrt(lambda_sq(k, beta));
}

/// Change to the eigenbasis of the k-th linear block:
///   u_k^+ = u_k/2 + v_k/(2 lambda_k),  u_k^- = u_k/2 - v_k/(2 lambda_k).
inline std::pair<Interval, Interval> to_diag(const Interval& u, const Interval& v, int k,
                                             const Interval& beta) {
    const Interval two_lam = mul(Interval(2.0), lambda_k(k, beta));
    const Interval half_u = div(u, Interval(2.0));
    const Interval ratio = div(v, two_lam);
    return {add(half_u, ratio), sub(half_u, ratio)};
}

/// Inverse change of variables: u_k = u^+ + u^-, v_k = lambda_k (u^+ - u^-).
inline std::pair<Interval, Interval> from_diag(const Interval& plus, const Interval& minus,
                                               int k, const Interval& beta) {
    return {add(plus, minus), mul(lambda_k(k, beta), sub(plus, minus))};
}

/// A floating-point point in diagonalized coordinates (sandbox use only;
/// carries no rigor).
struct DiagPoint {
    std::vector<double> plus;
    std::vector<double> minus;

    DiagPoint() = default;
    explicit DiagPoint(std::size_t n) : plus(n, 0.0), minus(n, 0.0) {}

    std::size_t modes() const { return plus.size(); }
};

}  // namespace segcert
