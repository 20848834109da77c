// oracle.hpp: brute-force dephasing backend built from a finite set of bath modes.
//
// Each mode contributes an exact thermal displacement-operator factor, so the
// decoherence function, the two-time factor and the two-time phase are plain
// mode sums. None of the closed forms in dephasing.hpp are used here.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "dephase/dephasing.hpp"
#include "dephase/errors.hpp"
#include "dephase/qdmat.hpp"
#include "dephase/spectral.hpp"

namespace dephase {

/// Gauss-Legendre nodes and weights on [-1, 1], ascending nodes.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {
/// P_n(x) and P_n'(x) by the three-term recurrence.
inline std::pair<double, double> legendre_with_derivative(std::size_t n, double x) {
    double prev = 1.0, cur = x;
    if (n == 0) return {1.0, 0.0};
    for (std::size_t k = 2; k <= n; ++k) {
        const double next = ((2.0 * k - 1.0) * x * cur - (k - 1.0) * prev) / static_cast<double>(k);
        prev = cur;
        cur = next;
    }
    return {cur, static_cast<double>(n) * (x * cur - prev) / (x * x - 1.0)};
}
} // namespace detail

inline GaussLegendreRule gauss_legendre(std::size_t n) {
    if (n == 0) throw InvalidArgument("gauss_legendre: order must be positive");
    GaussLegendreRule rule{std::vector<double>(n), std::vector<double>(n)};
    const double nd = static_cast<double>(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        // Tricomi initial guess for the i-th largest root, then Newton
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = detail::legendre_with_derivative(n, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double dp = detail::legendre_with_derivative(n, x).second;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[n - 1 - i] = x;
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

/// Discrete bath: mode frequencies w_k and weights J(w_k) dw_k = 4 |g_k|^2 (density).
/// Optional per-mode coupling phases enter only through the two-time phase.
class BathModeSet {
public:
    BathModeSet(std::vector<double> omegas, std::vector<double> weights, InverseTemperature beta,
                std::vector<double> coupling_phases = {})
        : omegas_(std::move(omegas)), weights_(std::move(weights)), beta_(beta),
          phases_(std::move(coupling_phases)) {
        if (omegas_.size() != weights_.size())
            throw InvalidArgument("bath: frequency and weight counts differ");
        if (!phases_.empty() && phases_.size() != omegas_.size())
            throw InvalidArgument("bath: coupling phase count differs from mode count");
        for (std::size_t k = 0; k < omegas_.size(); ++k) {
            if (!(omegas_[k] > 0.0)) throw InvalidArgument("bath: mode frequencies must be > 0");
            if (k > 0 && !(omegas_[k] > omegas_[k - 1]))
                throw InvalidArgument("bath: frequencies must be strictly increasing");
            if (!(weights_[k] >= 0.0) || !std::isfinite(weights_[k]))
                throw InvalidArgument("bath: weights must be finite and >= 0");
        }
    }

    std::size_t size() const noexcept { return omegas_.size(); }
    const std::vector<double>& omegas() const noexcept { return omegas_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    const InverseTemperature& beta() const noexcept { return beta_; }

    /// Complex coupling g_k = sqrt(weight_k)/2 exp(i theta_k).
    cplx coupling(std::size_t k) const {
        const double mag = 0.5 * std::sqrt(weights_[k]);
        return phases_.empty() ? cplx(mag, 0.0) : std::polar(mag, phases_[k]);
    }

    /// alpha_k(t) = 2 g_k (1 - exp(i w_k t)) / w_k.
    cplx alpha(std::size_t k, double t) const {
        return 2.0 * coupling(k) * (1.0 - std::polar(1.0, omegas_[k] * t)) / omegas_[k];
    }

    double total_weight() const {
        double s = 0.0;
        for (double w : weights_) s += w;
        return s;
    }

    /// int_{omega_max}^inf J when built by discretize_bath and it exceeds 1e-12 of int J.
    std::optional<double> truncation_warning;

private:
    std::vector<double> omegas_;
    std::vector<double> weights_;
    InverseTemperature beta_;
    std::vector<double> phases_;
};

/// Gauss-Legendre discretization of J on [0, omega_max]; the rule lives on [-1, 1]
/// so sweeps can build the nodes once.
inline BathModeSet discretize_bath(const OhmicFamilySpectralDensity& sd,
                                   const InverseTemperature& beta, const GaussLegendreRule& rule,
                                   double omega_max) {
    const std::size_t modes = rule.nodes.size();
    if (modes < 2) throw InvalidArgument("discretize_bath: need at least 2 modes");
    if (!(omega_max >= 10.0 * sd.cutoff()))
        throw InvalidArgument("discretize_bath: omega_max must be >= 10 Omega");
    const double half = 0.5 * omega_max;
    std::vector<double> omegas(modes), weights(modes);
    for (std::size_t k = 0; k < modes; ++k) {
        omegas[k] = half * (rule.nodes[k] + 1.0);
        weights[k] = evaluate_spectral_density(sd, omegas[k]) * rule.weights[k] * half;
    }
    BathModeSet bath{std::move(omegas), std::move(weights), beta};
    if (sd.lambda() > 0.0) {
        const double scale = sd.lambda() * sd.cutoff() * sd.cutoff();
        const double total = scale * std::tgamma(sd.s() + 1.0);
        const double tail = scale * boost::math::tgamma(sd.s() + 1.0, omega_max / sd.cutoff());
        if (tail > 1e-12 * total) bath.truncation_warning = tail;
    }
    return bath;
}

/// K-mode discretization.
inline BathModeSet discretize_bath(const OhmicFamilySpectralDensity& sd,
                                   const InverseTemperature& beta, std::size_t modes,
                                   double omega_max) {
    if (modes < 2) throw InvalidArgument("discretize_bath: need at least 2 modes");
    return discretize_bath(sd, beta, gauss_legendre(modes), omega_max);
}

/// -ln gamma(t) = sum_k weight_k coth(beta w_k/2) (1 - cos w_k t) / w_k^2.
inline double oracle_decoherence_exponent(const BathModeSet& bath, double t) {
    if (!(t >= 0.0)) throw InvalidArgument("oracle_gamma: time must be >= 0");
    double acc = 0.0;
    for (std::size_t k = 0; k < bath.size(); ++k) {
        const double w = bath.omegas()[k];
        const double h = std::sin(0.5 * w * t);
        acc += bath.weights()[k] * bath.beta().coth_factor(w) * 2.0 * h * h / (w * w);
    }
    return acc;
}

inline double oracle_gamma(const BathModeSet& bath, double t) {
    return std::exp(-oracle_decoherence_exponent(bath, t));
}

/// D(t) = sum_k weight_k coth(beta w_k/2) sin(w_k t) / w_k.
inline double oracle_rate(const BathModeSet& bath, double t) {
    double acc = 0.0;
    for (std::size_t k = 0; k < bath.size(); ++k) {
        const double w = bath.omegas()[k];
        acc += bath.weights()[k] * bath.beta().coth_factor(w) * std::sin(w * t) / w;
    }
    return acc;
}

struct TwoTimeFactors {
    double gamma21;   // thermal expectation of prod_k D(alpha_k(t2) - alpha_k(t1))
    double phi21;     // sum_k Im[conj(alpha_k(t2)) alpha_k(t1)]
};

/// Two-time factors assembled mode by mode from the displacement amplitudes.
inline TwoTimeFactors oracle_two_time(const BathModeSet& bath, double t1, double t2) {
    if (!(t1 >= 0.0 && t2 >= t1))
        throw InvalidArgument("oracle_two_time: requires 0 <= t1 <= t2");
    double exponent = 0.0;
    double phi = 0.0;
    for (std::size_t k = 0; k < bath.size(); ++k) {
        const cplx a2 = bath.alpha(k, t2);
        const cplx a1 = bath.alpha(k, t1);
        // <D(a)>_thermal = exp(-|a|^2 coth(beta w/2) / 2)
        exponent += 0.5 * std::norm(a2 - a1) * bath.beta().coth_factor(bath.omegas()[k]);
        phi += (std::conj(a2) * a1).imag();
    }
    return {std::exp(-exponent), phi};
}

/// |1 - gamma(t2) / (gamma(t1) gamma(t2,t1) e^{i phi})| with every factor from the mode sums.
inline double oracle_z(const BathModeSet& bath, double t1, double t2) {
    const auto f = oracle_two_time(bath, t1, t2);
    const cplx den = oracle_gamma(bath, t1) * f.gamma21 * std::polar(1.0, f.phi21);
    if (std::abs(den) < 1e-14) throw IllConditioned("oracle_z: denominator vanishes");
    return std::abs(1.0 - oracle_gamma(bath, t2) / den);
}

} // namespace dephase
