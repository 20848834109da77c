// photonic.hpp: polarization dephasing of a photon coupled to its own frequency
// through a birefringent plate. The decoherence function is the Fourier transform
// of the (Lorentzian-mixture) frequency distribution.

#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "dephase/errors.hpp"
#include "dephase/qdmat.hpp"
#include "dephase/spectral.hpp"

namespace dephase {

/// Minimum |gamma|, relative to its largest term, below which rates and ratios
/// are reported as singular.
inline constexpr double kSingularGamma = 1e-14;

class PhotonicModel {
public:
    explicit PhotonicModel(LorentzianMixture mixture) : mixture_(std::move(mixture)) {
        if (mixture_.delta_n() == 0.0)
            throw InvalidArgument("photonic model: delta_n must be nonzero");
    }

    const LorentzianMixture& mixture() const noexcept { return mixture_; }
    double delta_n() const noexcept { return mixture_.delta_n(); }

private:
    LorentzianMixture mixture_;
};

/// gamma(t) = sum_j A_j exp(-dn (dw_j - i w0_j) t).
inline cplx photonic_gamma(const PhotonicModel& model, double t) {
    if (!(t >= 0.0)) throw InvalidArgument("photonic_gamma: time must be >= 0");
    const double dn = model.delta_n();
    cplx g{};
    for (const auto& c : model.mixture().components())
        g += c.weight * std::exp(-dn * cplx(c.width, -c.center) * t);
    return g;
}

inline cplx photonic_gamma_derivative(const PhotonicModel& model, double t) {
    const double dn = model.delta_n();
    cplx g{};
    for (const auto& c : model.mixture().components()) {
        const cplx k = -dn * cplx(c.width, -c.center);
        g += c.weight * k * std::exp(k * t);
    }
    return g;
}

namespace detail {

/// gamma and gamma' divided by the largest term magnitude max_j A_j exp(-dn dw_j t),
/// so that decay alone never looks like a zero.
struct ScaledGamma {
    cplx g;
    cplx dg;
    double log_envelope;
};

inline ScaledGamma scaled_gamma(const PhotonicModel& model, double t) {
    const double dn = model.delta_n();
    const auto& cs = model.mixture().components();
    double env = -std::numeric_limits<double>::infinity();
    for (const auto& c : cs) env = std::max(env, std::log(c.weight) - dn * c.width * t);
    ScaledGamma out{{}, {}, env};
    for (const auto& c : cs) {
        const cplx k = -dn * cplx(c.width, -c.center);
        const cplx term = std::exp(k * t + std::log(c.weight) - env);
        out.g += term;
        out.dg += k * term;
    }
    return out;
}

inline cplx photonic_log_derivative(const PhotonicModel& model, double t) {
    const auto sg = scaled_gamma(model, t);
    if (std::abs(sg.g) < kSingularGamma)
        throw IllConditioned("photonic rate: gamma(t) vanishes at t = " + std::to_string(t));
    return sg.dg / sg.g;
}

} // namespace detail

/// D(t) = -d ln|gamma| / dt, from the analytic derivative of the mixture.
inline double photonic_dephasing_rate(const PhotonicModel& model, double t) {
    return -detail::photonic_log_derivative(model, t).real();
}

/// epsilon(t) = -Im[gamma'/gamma] (the system frequency is zero for this model).
inline double photonic_energy_shift(const PhotonicModel& model, double t) {
    return -detail::photonic_log_derivative(model, t).imag();
}

/// Two components sharing one center: the rate is a positive weighted mean of the widths.
inline double photonic_dephasing_rate_equal_centers(const PhotonicModel& model, double t) {
    const auto& cs = model.mixture().components();
    if (cs.size() != 2 || cs[0].center != cs[1].center)
        throw InvalidArgument("equal-centers rate needs two components with one center");
    const double dn = model.delta_n();
    const double r = model.mixture().ratio();
    const double e1 = std::exp(-dn * cs[0].width * t);
    const double e2 = std::exp(-dn * cs[1].width * t);
    return dn * (cs[0].width * e1 + r * cs[1].width * e2) / (e1 + r * e2);
}

/// Z = |1 - gamma(t2) / (gamma(t1) gamma(t2 - t1))|; the two-time phase vanishes here.
inline double photonic_z(const PhotonicModel& model, double t1, double t2) {
    if (!(t1 >= 0.0 && t2 >= t1)) throw InvalidArgument("photonic_z: requires 0 <= t1 <= t2");
    const auto a = detail::scaled_gamma(model, t1);
    const auto b = detail::scaled_gamma(model, t2 - t1);
    const auto c = detail::scaled_gamma(model, t2);
    if (std::abs(a.g) < kSingularGamma || std::abs(b.g) < kSingularGamma)
        throw IllConditioned("photonic_z: gamma(t1) gamma(t2 - t1) vanishes");
    const double envelope = std::exp(c.log_envelope - a.log_envelope - b.log_envelope);
    return std::abs(1.0 - envelope * c.g / (a.g * b.g));
}

/// True when t lies within `radius` of a zero of gamma, judged by the Newton
/// step |gamma / gamma'|. Z grids exclude and flag such points.
inline bool near_gamma_zero(const PhotonicModel& model, double t, double radius = 1e-8) {
    const auto sg = detail::scaled_gamma(model, t);
    const double g = std::abs(sg.g);
    return g < kSingularGamma || g < radius * std::abs(sg.dg);
}

/// Entanglement entropy of the photon's total state alpha|H> + beta|V> after time t.
inline double total_state_entanglement(const PhotonicModel& model, cplx alpha, cplx beta,
                                       double t) {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > kStateTolerance)
        throw InvalidArgument("total_state_entanglement: |alpha|^2 + |beta|^2 must be 1");
    const DensityMatrix2 reduced{std::norm(alpha), std::norm(beta),
                                 alpha * std::conj(beta) * std::conj(photonic_gamma(model, t))};
    return von_neumann_entropy(reduced);
}

// Two-peak families used for the QRT-violation maps.

/// Equal centers w0, widths base + delta_width and base, weight ratio r.
inline PhotonicModel split_width_model(double delta_width, double center = 1.0,
                                       double base_width = 0.5, double ratio = 1.0,
                                       double delta_n = 1.0) {
    return PhotonicModel{LorentzianMixture::pair(ratio, {0.0, center, base_width + delta_width},
                                                 {0.0, center, base_width}, delta_n)};
}

/// Equal widths, centers delta_center and 0, weight ratio r.
inline PhotonicModel split_center_model(double delta_center, double width = 1.0,
                                        double ratio = 2.0, double delta_n = 1.0) {
    return PhotonicModel{LorentzianMixture::pair(ratio, {0.0, delta_center, width},
                                                 {0.0, 0.0, width}, delta_n)};
}

} // namespace dephase
