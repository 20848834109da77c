// spectral.hpp: ohmic-family spectral densities and Lorentzian frequency distributions

#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "dephase/errors.hpp"

namespace dephase {

/// J(w) = lambda w^s Omega^(1-s) exp(-w/Omega).
/// lambda = 0 is accepted as the decoupled limit.
class OhmicFamilySpectralDensity {
public:
    OhmicFamilySpectralDensity(double lambda, double s, double omega)
        : lambda_(lambda), s_(s), omega_(omega) {
        if (!(lambda >= 0.0) || !std::isfinite(lambda))
            throw InvalidArgument("spectral density: lambda must be >= 0");
        if (!(s > 0.0) || !std::isfinite(s))
            throw InvalidArgument("spectral density: s must be > 0");
        if (!(omega > 0.0) || !std::isfinite(omega))
            throw InvalidArgument("spectral density: cutoff Omega must be > 0");
    }

    double lambda() const noexcept { return lambda_; }
    double s() const noexcept { return s_; }
    double cutoff() const noexcept { return omega_; }

    /// Copies with one parameter replaced.
    OhmicFamilySpectralDensity with_exponent(double s) const { return {lambda_, s, omega_}; }
    OhmicFamilySpectralDensity with_coupling(double lambda) const { return {lambda, s_, omega_}; }

    friend bool operator==(const OhmicFamilySpectralDensity&,
                           const OhmicFamilySpectralDensity&) = default;

private:
    double lambda_;
    double s_;
    double omega_;
};

inline double evaluate_spectral_density(const OhmicFamilySpectralDensity& sd, double w) {
    if (!(w >= 0.0)) throw InvalidArgument("spectral density: negative frequency");
    if (w == 0.0) return 0.0;
    const double x = w / sd.cutoff();
    return sd.lambda() * sd.cutoff() * std::pow(x, sd.s()) * std::exp(-x);
}

struct LorentzianComponent {
    double weight;      // A_j
    double center;      // omega_0,j
    double width;       // delta omega_j
};

/// Normalized mixture of Lorentzians plus the refractive-index difference Delta n.
class LorentzianMixture {
public:
    LorentzianMixture(std::vector<LorentzianComponent> components, double delta_n)
        : components_(std::move(components)), delta_n_(delta_n) {
        if (components_.empty())
            throw InvalidArgument("lorentzian mixture: at least one component required");
        double total = 0.0;
        for (const auto& c : components_) {
            if (!(c.weight > 0.0 && c.weight <= 1.0))
                throw InvalidArgument("lorentzian mixture: weight must lie in (0, 1]");
            if (!(c.width > 0.0) || !std::isfinite(c.width))
                throw InvalidArgument("lorentzian mixture: width must be > 0");
            if (!std::isfinite(c.center))
                throw InvalidArgument("lorentzian mixture: non-finite center");
            total += c.weight;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw InvalidArgument("lorentzian mixture: weights sum to " + std::to_string(total));
        if (!std::isfinite(delta_n))
            throw InvalidArgument("lorentzian mixture: non-finite delta_n");
    }

    static LorentzianMixture single(double center, double width, double delta_n) {
        return {{{1.0, center, width}}, delta_n};
    }

    /// Two components with weight ratio r = A2/A1.
    static LorentzianMixture pair(double ratio, LorentzianComponent first,
                                  LorentzianComponent second, double delta_n) {
        if (!(ratio > 0.0)) throw InvalidArgument("lorentzian mixture: ratio must be > 0");
        first.weight = 1.0 / (1.0 + ratio);
        second.weight = 1.0 - first.weight;
        return {{first, second}, delta_n};
    }

    const std::vector<LorentzianComponent>& components() const noexcept { return components_; }
    double delta_n() const noexcept { return delta_n_; }

    /// A2/A1; only meaningful for two-component mixtures.
    double ratio() const {
        if (components_.size() != 2)
            throw InvalidArgument("lorentzian mixture: ratio needs exactly two components");
        return components_[1].weight / components_[0].weight;
    }

private:
    std::vector<LorentzianComponent> components_;
    double delta_n_;
};

inline double evaluate_lorentzian(const LorentzianComponent& c, double w) {
    const double d = w - c.center;
    return c.weight * c.width / (std::numbers::pi * (d * d + c.width * c.width));
}

/// |f(w)|^2 of the mixture; integrates to one over the real line.
inline double evaluate_frequency_distribution(const LorentzianMixture& mix, double w) {
    double v = 0.0;
    for (const auto& c : mix.components()) v += evaluate_lorentzian(c, w);
    return v;
}

} // namespace dephase
