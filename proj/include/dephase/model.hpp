// model.hpp: a single handle over all dephasing backends, and the time-local
// master equation they generate.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "dephase/dephasing.hpp"
#include "dephase/errors.hpp"
#include "dephase/oracle.hpp"
#include "dephase/photonic.hpp"
#include "dephase/qdmat.hpp"
#include "dephase/spectral.hpp"

namespace dephase {

/// gamma(t2, t1) and the displacement phase phi(t2, t1) entering the exact
/// two-time correlation functions.
struct TwoTimeData {
    cplx gamma21;
    double phi21;
};

class DephasingModel {
public:
    struct SpinBosonClosed {
        OhmicFamilySpectralDensity sd;
    };
    struct SpinBosonQuadrature {
        OhmicFamilySpectralDensity sd;
        InverseTemperature beta;
        QuadratureOptions options;
    };
    struct Photonic {
        PhotonicModel model;
    };
    struct Oracle {
        std::shared_ptr<const BathModeSet> bath;
    };
    /// Arbitrary user-supplied functions; used for test fixtures and external data.
    struct Custom {
        std::function<cplx(double)> gamma;
        std::function<double(double)> rate;
        std::function<double(double)> energy_shift;
        std::function<TwoTimeData(double, double)> two_time;  // optional
        std::optional<double> abs_gamma_limit;
        std::string label = "custom";
    };
    using Backend = std::variant<SpinBosonClosed, SpinBosonQuadrature, Photonic, Oracle, Custom>;

    static DephasingModel spin_boson(const OhmicFamilySpectralDensity& sd, double omega_s = 0.0) {
        return {SpinBosonClosed{sd}, omega_s, 1.0 / sd.cutoff()};
    }
    static DephasingModel spin_boson_quadrature(const OhmicFamilySpectralDensity& sd,
                                                InverseTemperature beta, double omega_s = 0.0,
                                                QuadratureOptions options = {}) {
        if (beta.is_zero_temperature())
            throw UnsupportedParameter("quadrature backend needs a finite beta");
        return {SpinBosonQuadrature{sd, beta, options}, omega_s, 1.0 / sd.cutoff()};
    }
    static DephasingModel photonic(PhotonicModel model) {
        double widest = 0.0;
        for (const auto& c : model.mixture().components()) widest = std::max(widest, c.width);
        const double scale = 1.0 / (std::abs(model.delta_n()) * widest);
        return {Photonic{std::move(model)}, 0.0, scale};
    }
    static DephasingModel oracle(BathModeSet bath, double omega_s = 0.0, double time_scale = 1.0) {
        return {Oracle{std::make_shared<const BathModeSet>(std::move(bath))}, omega_s, time_scale};
    }
    static DephasingModel custom(Custom c, double omega_s = 0.0, double time_scale = 1.0) {
        if (!c.gamma || !c.rate || !c.energy_shift)
            throw InvalidArgument("custom model: gamma, rate and energy_shift are required");
        return {std::move(c), omega_s, time_scale};
    }

    const Backend& backend() const noexcept { return backend_; }
    double omega_s() const noexcept { return omega_s_; }
    /// Characteristic time (1/Omega for the spin-boson family).
    double time_scale() const noexcept { return time_scale_; }

    /// Decoherence function gamma(t), excluding the free factor exp(-i omega_s t).
    cplx gamma(double t) const {
        return std::visit(
            [&](const auto& b) -> cplx {
                using B = std::decay_t<decltype(b)>;
                if constexpr (std::is_same_v<B, SpinBosonClosed>)
                    return decoherence_closed(b.sd, t);
                else if constexpr (std::is_same_v<B, SpinBosonQuadrature>)
                    return decoherence_quadrature(b.sd, b.beta, t, b.options);
                else if constexpr (std::is_same_v<B, Photonic>)
                    return photonic_gamma(b.model, t);
                else if constexpr (std::is_same_v<B, Oracle>)
                    return oracle_gamma(*b.bath, t);
                else
                    return b.gamma(t);
            },
            backend_);
    }

    /// ln|gamma(t)|, evaluated without exponentiating where a backend allows it.
    double log_abs_gamma(double t) const {
        if (const auto* b = std::get_if<SpinBosonClosed>(&backend_))
            return log_decoherence_closed(b->sd, t);
        if (const auto* b = std::get_if<SpinBosonQuadrature>(&backend_))
            return -decoherence_exponent_quadrature(b->sd, b->beta, t, b->options);
        if (const auto* b = std::get_if<Oracle>(&backend_))
            return -oracle_decoherence_exponent(*b->bath, t);
        return std::log(std::abs(gamma(t)));
    }

    /// Dephasing rate D(t) = -d ln|gamma| / dt.
    double rate(double t) const {
        return std::visit(
            [&](const auto& b) -> double {
                using B = std::decay_t<decltype(b)>;
                if constexpr (std::is_same_v<B, SpinBosonClosed>)
                    return dephasing_rate_closed(b.sd, t);
                else if constexpr (std::is_same_v<B, SpinBosonQuadrature>)
                    return dephasing_rate_quadrature(b.sd, b.beta, t, b.options);
                else if constexpr (std::is_same_v<B, Photonic>)
                    return photonic_dephasing_rate(b.model, t);
                else if constexpr (std::is_same_v<B, Oracle>)
                    return oracle_rate(*b.bath, t);
                else
                    return b.rate(t);
            },
            backend_);
    }

    /// Frequency epsilon(t) of the commutator term: omega_s - Im[gamma'/gamma].
    double energy_shift(double t) const {
        if (const auto* b = std::get_if<Photonic>(&backend_))
            return omega_s_ + photonic_energy_shift(b->model, t);
        if (const auto* b = std::get_if<Custom>(&backend_)) return b->energy_shift(t);
        return omega_s_;
    }

    /// |gamma(t)| as t -> infinity when known in closed form.
    std::optional<double> abs_gamma_limit() const {
        if (const auto* b = std::get_if<SpinBosonClosed>(&backend_)) {
            if (b->sd.s() > 1.0) return std::exp(log_decoherence_limit(b->sd));
            return std::nullopt;
        }
        if (const auto* b = std::get_if<Custom>(&backend_)) return b->abs_gamma_limit;
        return std::nullopt;
    }

    /// gamma(t2, t1) and phi(t2, t1). Unsupported for the finite-temperature quadrature backend.
    TwoTimeData two_time(double t1, double t2) const {
        if (!(t1 >= 0.0 && t2 >= t1)) throw InvalidArgument("two_time: requires 0 <= t1 <= t2");
        return std::visit(
            [&](const auto& b) -> TwoTimeData {
                using B = std::decay_t<decltype(b)>;
                if constexpr (std::is_same_v<B, SpinBosonClosed>) {
                    return {decoherence_closed(b.sd, t2 - t1), phase_phi(b.sd, t1, t2)};
                } else if constexpr (std::is_same_v<B, SpinBosonQuadrature>) {
                    throw UnsupportedParameter(
                        "two-time correlations are only available at zero temperature or "
                        "through the mode-sum backend");
                } else if constexpr (std::is_same_v<B, Photonic>) {
                    return {photonic_gamma(b.model, t2 - t1), 0.0};
                } else if constexpr (std::is_same_v<B, Oracle>) {
                    const auto f = oracle_two_time(*b.bath, t1, t2);
                    return {f.gamma21, f.phi21};
                } else {
                    if (!b.two_time)
                        throw UnsupportedParameter("custom model has no two-time data");
                    return b.two_time(t1, t2);
                }
            },
            backend_);
    }

    std::string description() const {
        return std::visit(
            [&](const auto& b) -> std::string {
                using B = std::decay_t<decltype(b)>;
                if constexpr (std::is_same_v<B, SpinBosonClosed>)
                    return "spin-boson closed form";
                else if constexpr (std::is_same_v<B, SpinBosonQuadrature>)
                    return "spin-boson quadrature";
                else if constexpr (std::is_same_v<B, Photonic>)
                    return "photonic lorentzian mixture";
                else if constexpr (std::is_same_v<B, Oracle>)
                    return "discrete bath oracle";
                else
                    return b.label;
            },
            backend_);
    }

private:
    DephasingModel(Backend b, double omega_s, double time_scale)
        : backend_(std::move(b)), omega_s_(omega_s), time_scale_(time_scale) {}

    Backend backend_;
    double omega_s_;
    double time_scale_;
};

/// Exact reduced state at time t.
inline DensityMatrix2 evolve_exact(const DephasingModel& model, const DensityMatrix2& rho0,
                                   double t) {
    return dephase_evolve(rho0, model.gamma(t), model.omega_s(), t);
}

// ---------------------------------------------------------------------------
// Master equation

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double initial_step = 1e-4;     // in units of the model time scale
    int max_steps_between_outputs = 200000;
};

namespace detail {

using MasterState = std::array<double, 4>;  // rho00, rho11, Re rho01, Im rho01

inline Mat2 to_matrix(const MasterState& x) {
    Mat2 r;
    r(0, 0) = x[0];
    r(1, 1) = x[1];
    r(0, 1) = cplx(x[2], x[3]);
    r(1, 0) = cplx(x[2], -x[3]);
    return r;
}

/// d rho/dt = -i (eps/2) [sz, rho] + (D/2)(sz rho sz - rho).
inline Mat2 dephasing_generator(const Mat2& rho, double eps, double rate) {
    Mat2 sz;
    sz(0, 0) = 1.0;
    sz(1, 1) = -1.0;
    const Mat2 a = sz * rho;
    const Mat2 b = rho * sz;
    const Mat2 c = a * sz;
    Mat2 out;
    for (std::size_t k = 0; k < 4; ++k)
        out.m[k] = cplx(0.0, -0.5 * eps) * (a.m[k] - b.m[k]) + 0.5 * rate * (c.m[k] - rho.m[k]);
    return out;
}

} // namespace detail

/// Integrates the time-local master equation with rate D(t) and frequency
/// epsilon(t) from the model. Adaptive Dormand-Prince 5(4) with dense output;
/// one state per requested time.
inline std::vector<DensityMatrix2> integrate_master_equation(const DephasingModel& model,
                                                             const DensityMatrix2& rho0,
                                                             std::span<const double> t_grid,
                                                             const OdeOptions& opt = {}) {
    namespace odeint = boost::numeric::odeint;
    using detail::MasterState;
    if (t_grid.empty() || t_grid.front() != 0.0)
        throw InvalidArgument("integrate_master_equation: time grid must start at 0");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1]))
            throw InvalidArgument("integrate_master_equation: time grid must be ascending");

    auto rhs = [&](const MasterState& x, MasterState& dxdt, double t) {
        const Mat2 d = detail::dephasing_generator(detail::to_matrix(x), model.energy_shift(t),
                                                   model.rate(t));
        dxdt = {d(0, 0).real(), d(1, 1).real(), d(0, 1).real(), d(0, 1).imag()};
    };

    std::vector<DensityMatrix2> out;
    out.reserve(t_grid.size());
    double last_time = 0.0;
    auto observer = [&](const MasterState& x, double t) {
        last_time = t;
        out.emplace_back(x[0], x[1], cplx(x[2], x[3]));
    };

    MasterState x{rho0.rho00(), rho0.rho11(), rho0.rho01().real(), rho0.rho01().imag()};
    if (t_grid.size() == 1) {
        observer(x, 0.0);
        return out;
    }
    auto stepper = odeint::make_dense_output(opt.abs_tol, opt.rel_tol,
                                             odeint::runge_kutta_dopri5<MasterState>());
    try {
        odeint::integrate_times(stepper, rhs, x, t_grid.begin(), t_grid.end(),
                                opt.initial_step * model.time_scale(), observer,
                                odeint::max_step_checker(opt.max_steps_between_outputs));
    } catch (const std::exception& e) {
        throw IntegrationFailure(std::string("master equation integration failed after t = ") +
                                     std::to_string(last_time) + ": " + e.what(),
                                 last_time);
    }
    return out;
}

} // namespace dephase
