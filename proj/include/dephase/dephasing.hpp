// dephasing.hpp: decoherence function, dephasing rate and two-time phase of the
// pure-dephasing spin-boson model with an ohmic-family spectral density.
//
// Closed forms hold at zero temperature. The quadrature backend evaluates the
// coth-weighted frequency integrals directly and accepts any finite beta.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "dephase/errors.hpp"
#include "dephase/quadrature.hpp"
#include "dephase/spectral.hpp"

namespace dephase {

/// beta = 1/(k_B T). Zero temperature is a distinguished value, not a large beta.
class InverseTemperature {
public:
    static InverseTemperature zero_temperature() { return InverseTemperature{}; }
    static InverseTemperature finite(double beta) {
        if (!(beta > 0.0) || !std::isfinite(beta))
            throw InvalidArgument("inverse temperature must be finite and > 0");
        InverseTemperature b;
        b.beta_ = beta;
        return b;
    }

    bool is_zero_temperature() const noexcept { return !beta_.has_value(); }
    double beta() const noexcept {
        return beta_ ? *beta_ : std::numeric_limits<double>::infinity();
    }

    /// coth(beta w / 2); exactly 1 at zero temperature.
    double coth_factor(double w) const {
        if (!beta_) return 1.0;
        const double x = 0.5 * (*beta_) * w;
        if (x > 20.0) return 1.0 + 2.0 * std::exp(-2.0 * x);
        return 1.0 / std::tanh(x);
    }

    friend bool operator==(const InverseTemperature&, const InverseTemperature&) = default;

private:
    InverseTemperature() = default;
    std::optional<double> beta_;
};

namespace detail {

inline void require_time(double t, const char* what) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw InvalidArgument(std::string(what) + ": time must be finite and >= 0");
}

inline void require_super_ohmic(const OhmicFamilySpectralDensity& sd, const char* what) {
    if (!(sd.s() > 1.0))
        throw UnsupportedParameter(std::string(what) + ": closed form needs s > 1 (got s = " +
                                   std::to_string(sd.s()) +
                                   "); use the quadrature backend instead");
}

} // namespace detail

/// D_s(t) = lambda Omega Gamma(s) (1 + (Omega t)^2)^(-s/2) sin(s arctan(Omega t)).
inline double dephasing_rate_closed(const OhmicFamilySpectralDensity& sd, double t) {
    detail::require_time(t, "dephasing_rate_closed");
    const double x = sd.cutoff() * t;
    return sd.lambda() * sd.cutoff() * std::tgamma(sd.s()) *
           std::pow(1.0 + x * x, -0.5 * sd.s()) * std::sin(sd.s() * std::atan(x));
}

/// Same quantity as dephasing_rate_closed, written as
/// lambda Omega Gamma(s) Im[(1 + i Omega t)^s] / (1 + (Omega t)^2)^s.
inline double dephasing_rate_compact(const OhmicFamilySpectralDensity& sd, double t) {
    detail::require_time(t, "dephasing_rate_compact");
    const double x = sd.cutoff() * t;
    const std::complex<double> w = std::pow(std::complex<double>(1.0, x), sd.s());
    return sd.lambda() * sd.cutoff() * std::tgamma(sd.s()) * w.imag() /
           std::pow(1.0 + x * x, sd.s());
}

/// ln gamma_s(t) at zero temperature. s = 1 uses the elementary form
/// -lambda/2 ln(1 + (Omega t)^2); other s <= 1 are unsupported.
inline double log_decoherence_closed(const OhmicFamilySpectralDensity& sd, double t) {
    detail::require_time(t, "decoherence_closed");
    const double x = sd.cutoff() * t;
    if (sd.s() == 1.0) return -0.5 * sd.lambda() * std::log1p(x * x);
    detail::require_super_ohmic(sd, "decoherence_closed");
    const double sm1 = sd.s() - 1.0;
    const std::complex<double> w = std::pow(std::complex<double>(1.0, x), sm1);
    return -sd.lambda() * std::tgamma(sm1) * (1.0 - w.real() / std::pow(1.0 + x * x, sm1));
}

inline double decoherence_closed(const OhmicFamilySpectralDensity& sd, double t) {
    return std::exp(log_decoherence_closed(sd, t));
}

/// lim_{t -> inf} ln gamma_s(t) = -lambda Gamma(s - 1); needs s > 1.
inline double log_decoherence_limit(const OhmicFamilySpectralDensity& sd) {
    detail::require_super_ohmic(sd, "decoherence limit");
    return -sd.lambda() * std::tgamma(sd.s() - 1.0);
}

/// phi_s(t2, t1) = (D_{s-1}(t2) - D_{s-1}(t1) - D_{s-1}(t2 - t1)) / Omega.
inline double phase_phi(const OhmicFamilySpectralDensity& sd, double t1, double t2) {
    detail::require_time(t1, "phase_phi");
    if (!(t2 >= t1) || !std::isfinite(t2))
        throw InvalidArgument("phase_phi: requires t2 >= t1");
    detail::require_super_ohmic(sd, "phase_phi");
    const auto lower = sd.with_exponent(sd.s() - 1.0);
    return (dephasing_rate_compact(lower, t2) - dephasing_rate_compact(lower, t1) -
            dephasing_rate_compact(lower, t2 - t1)) /
           sd.cutoff();
}

// ---------------------------------------------------------------------------
// Quadrature backend

struct QuadratureOptions {
    double rel_tol = 1e-8;      // on the result, relative to the integrand's L1 norm
    double panel_tol = 1e-10;   // per panel, relative to the panel's L1 norm
    int base_knots = 40;        // panels of width Omega before the tail
};

namespace detail {

inline quadrature::PanelSchedule schedule_for(const OhmicFamilySpectralDensity& sd, double t,
                                              const QuadratureOptions& opt) {
    // extra knots keep the exponential tail bound valid for large s
    const int knots = opt.base_knots + static_cast<int>(std::ceil(2.0 * sd.s()));
    const double cap = t > 0.0 ? std::numbers::pi / (4.0 * t) : 0.0;
    return {sd.cutoff(), knots, cap};
}

inline void require_finite_beta(const InverseTemperature& beta, const char* what) {
    if (beta.is_zero_temperature())
        throw UnsupportedParameter(std::string(what) +
                                   ": quadrature backend needs a finite beta; use the closed form "
                                   "at zero temperature");
}

inline double finish(const quadrature::Result& r, double tail, const QuadratureOptions& opt,
                     const char* what) {
    const double err = r.error + tail;
    const double scale = std::max(r.l1, std::numeric_limits<double>::min());
    if (err > opt.rel_tol * scale && err > 1e-300)
        throw QuadratureError(std::string(what) + ": tolerance not reached", r.value, err);
    return r.value;
}

} // namespace detail

/// int_0^inf J(w) coth(beta w/2) sin(w t) / w dw.
inline double dephasing_rate_quadrature(const OhmicFamilySpectralDensity& sd,
                                        const InverseTemperature& beta, double t,
                                        const QuadratureOptions& opt = {}) {
    detail::require_time(t, "dephasing_rate_quadrature");
    detail::require_finite_beta(beta, "dephasing_rate_quadrature");
    if (t == 0.0 || sd.lambda() == 0.0) return 0.0;
    auto f = [&](double w) {
        return evaluate_spectral_density(sd, w) * beta.coth_factor(w) * std::sin(w * t) / w;
    };
    const auto sched = detail::schedule_for(sd, t, opt);
    const auto r = quadrature::integrate_panels(f, sched, opt.panel_tol);
    const double upper = sched.knots * sched.unit;
    const double tail = sd.lambda() * std::pow(sd.cutoff(), 1.0 - sd.s()) *
                        beta.coth_factor(upper) *
                        quadrature::exponential_tail_bound(sd.s() - 1.0, sd.cutoff(), upper);
    return detail::finish(r, tail, opt, "dephasing_rate_quadrature");
}

/// -ln gamma(t) = int_0^inf J(w) coth(beta w/2) (1 - cos w t) / w^2 dw.
inline double decoherence_exponent_quadrature(const OhmicFamilySpectralDensity& sd,
                                              const InverseTemperature& beta, double t,
                                              const QuadratureOptions& opt = {}) {
    detail::require_time(t, "decoherence_quadrature");
    detail::require_finite_beta(beta, "decoherence_quadrature");
    if (t == 0.0 || sd.lambda() == 0.0) return 0.0;
    auto f = [&](double w) {
        const double h = std::sin(0.5 * w * t);
        return evaluate_spectral_density(sd, w) * beta.coth_factor(w) * 2.0 * h * h / (w * w);
    };
    const auto sched = detail::schedule_for(sd, t, opt);
    const auto r = quadrature::integrate_panels(f, sched, opt.panel_tol);
    const double upper = sched.knots * sched.unit;
    const double tail = 2.0 * sd.lambda() * std::pow(sd.cutoff(), 1.0 - sd.s()) *
                        beta.coth_factor(upper) *
                        quadrature::exponential_tail_bound(sd.s() - 2.0, sd.cutoff(), upper);
    return detail::finish(r, tail, opt, "decoherence_quadrature");
}

inline double decoherence_quadrature(const OhmicFamilySpectralDensity& sd,
                                     const InverseTemperature& beta, double t,
                                     const QuadratureOptions& opt = {}) {
    return std::exp(-decoherence_exponent_quadrature(sd, beta, t, opt));
}

} // namespace dephase
