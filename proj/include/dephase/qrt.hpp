// qrt.hpp: exact and regression-theorem two-time correlation functions of a
// dephased two-level system, and the relative-error estimator Z.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <utility>

#include "dephase/dephasing.hpp"
#include "dephase/errors.hpp"
#include "dephase/model.hpp"
#include "dephase/qdmat.hpp"

namespace dephase {

using OperatorPair = std::pair<PauliBasisLabel, PauliBasisLabel>;

inline constexpr OperatorPair kLoweringRaising{PauliBasisLabel::SigmaMinus,
                                               PauliBasisLabel::SigmaPlus};
inline constexpr OperatorPair kRaisingLowering{PauliBasisLabel::SigmaPlus,
                                               PauliBasisLabel::SigmaMinus};

/// <A(t2) B(t1)> exactly and as predicted by the regression theorem.
struct TwoTimeCorrelation {
    cplx exact;
    cplx qrt;
    double t1;
    double t2;
    OperatorPair operators;
    /// The pair involves a conserved operator (or vanishes identically), so the
    /// regression theorem holds trivially and both values come from one-time evolution.
    bool trivial;
};

namespace detail {

inline bool is_conserved(PauliBasisLabel l) {
    return l == PauliBasisLabel::Identity || l == PauliBasisLabel::SigmaZ;
}

inline bool is_nontrivial(const OperatorPair& p) {
    return p == kLoweringRaising || p == kRaisingLowering;
}

inline void require_ordered(double t1, double t2, const char* what) {
    if (!(t1 >= 0.0 && t2 >= t1 && std::isfinite(t2)))
        throw InvalidArgument(std::string(what) + ": requires 0 <= t1 <= t2");
}

/// Lambda(t2, t1) applied to an arbitrary 2x2 operator: off-diagonals scale by
/// c = gamma(t2)/gamma(t1) exp(-i omega_s (t2 - t1)) and its conjugate.
inline Mat2 apply_propagator(const DephasingModel& model, const Mat2& x, double t1, double t2) {
    const cplx g1 = model.gamma(t1);
    if (std::abs(g1) < kSingularGamma)
        throw IllConditioned("regression propagator: |gamma(t1)| vanishes");
    const cplx c = model.gamma(t2) / g1 * std::polar(1.0, -model.omega_s() * (t2 - t1));
    Mat2 y = x;
    y(0, 1) *= c;
    y(1, 0) *= std::conj(c);
    return y;
}

inline cplx qrt_unchecked(const DephasingModel& model, const DensityMatrix2& rho0,
                          const OperatorPair& ops, double t1, double t2) {
    const Mat2 rho_t1 = evolve_exact(model, rho0, t1).matrix();
    const Mat2 b_rho = basis_matrix(ops.second) * rho_t1;
    return (basis_matrix(ops.first) * apply_propagator(model, b_rho, t1, t2)).trace();
}

} // namespace detail

/// Tr_S[A Lambda(t2, t1)[B rho(t1)]] for any pair of basis operators.
inline cplx corr_qrt(const DephasingModel& model, const DensityMatrix2& rho0, double t1, double t2,
                     const OperatorPair& ops = kLoweringRaising) {
    detail::require_ordered(t1, t2, "corr_qrt");
    return detail::qrt_unchecked(model, rho0, ops, t1, t2);
}

/// Exact <A(t2) B(t1)> from the full unitary dynamics.
///
/// For (sigma_-, sigma_+): exp(-i omega_s tau) gamma(t2,t1) exp(i phi(t2,t1)) <sigma_- sigma_+>(t1),
/// and the conjugate pattern (with the same exp(+i phi)) for (sigma_+, sigma_-).
/// Pairs containing a conserved operator reduce to one-time expectation values.
inline TwoTimeCorrelation two_time_correlation(const DephasingModel& model,
                                               const DensityMatrix2& rho0, double t1, double t2,
                                               const OperatorPair& ops = kLoweringRaising) {
    detail::require_ordered(t1, t2, "two_time_correlation");
    TwoTimeCorrelation out{{}, corr_qrt(model, rho0, t1, t2, ops), t1, t2, ops, false};
    const Mat2 a = basis_matrix(ops.first);
    const Mat2 b = basis_matrix(ops.second);
    if (detail::is_conserved(ops.first)) {
        out.exact = (a * b * evolve_exact(model, rho0, t1).matrix()).trace();
        out.trivial = true;
    } else if (detail::is_conserved(ops.second)) {
        out.exact = (a * b * evolve_exact(model, rho0, t2).matrix()).trace();
        out.trivial = true;
    } else if (!detail::is_nontrivial(ops)) {
        // sigma_-^2 = sigma_+^2 = 0
        out.exact = 0.0;
        out.trivial = true;
    } else {
        const double tau = t2 - t1;
        const auto tt = model.two_time(t1, t2);
        const DensityMatrix2 rho_t1 = evolve_exact(model, rho0, t1);
        const cplx phase = std::polar(1.0, tt.phi21);
        if (ops == kLoweringRaising)
            out.exact = std::polar(1.0, -model.omega_s() * tau) * tt.gamma21 * phase *
                        rho_t1.rho11();
        else
            out.exact = std::polar(1.0, model.omega_s() * tau) * std::conj(tt.gamma21) * phase *
                        rho_t1.rho00();
    }
    return out;
}

inline cplx corr_exact(const DephasingModel& model, const DensityMatrix2& rho0, double t1,
                       double t2, const OperatorPair& ops = kLoweringRaising) {
    return two_time_correlation(model, rho0, t1, t2, ops).exact;
}

/// Z = |1 - gamma(t2) / (gamma(t1) gamma(t2,t1) exp(i phi(t2,t1)))| for (sigma_-, sigma_+).
/// Independent of the initial state and of omega_s.
inline double z_estimator(const DephasingModel& model, double t1, double t2) {
    detail::require_ordered(t1, t2, "z_estimator");
    const auto tt = model.two_time(t1, t2);
    const cplx den = model.gamma(t1) * tt.gamma21 * std::polar(1.0, tt.phi21);
    if (std::abs(den) < kSingularGamma)
        throw IllConditioned("z_estimator: denominator vanishes");
    return std::abs(1.0 - model.gamma(t2) / den);
}

/// Z for an arbitrary pair and initial state, straight from |1 - qrt/exact|.
inline double z_for_pair(const DephasingModel& model, const DensityMatrix2& rho0, double t1,
                         double t2, const OperatorPair& ops) {
    const auto c = two_time_correlation(model, rho0, t1, t2, ops);
    if (std::abs(c.exact) < kSingularGamma)
        throw IllConditioned("z_for_pair: exact correlation vanishes");
    return std::abs(1.0 - c.qrt / c.exact);
}

/// Z_s(lambda) = |1 - exp[lambda Gamma(s-1) (1 - w(t2-t1) - w(t1) + w(t2))]|,
/// w(t) = (1 + i Omega t)^(1-s), at zero temperature.
inline double z_closed_spinboson(const OhmicFamilySpectralDensity& sd, double t1, double t2) {
    detail::require_ordered(t1, t2, "z_closed_spinboson");
    detail::require_super_ohmic(sd, "z_closed_spinboson");
    const double e = 1.0 - sd.s();
    auto w = [&](double t) { return std::pow(cplx(1.0, sd.cutoff() * t), e); };
    const cplx x = sd.lambda() * std::tgamma(sd.s() - 1.0) * (1.0 - w(t2 - t1) - w(t1) + w(t2));
    return std::abs(1.0 - std::exp(x));
}

/// Diagonal element of the mean-value generator G(t) in the basis
/// {1/sqrt2, sigma_-, sigma_+, sigma_z/sqrt2}: -D - i eps for sigma_-,
/// its conjugate for sigma_+, zero for the conserved operators.
inline cplx generator_diagonal(const DephasingModel& model, PauliBasisLabel l, double t) {
    switch (l) {
    case PauliBasisLabel::SigmaMinus: return {-model.rate(t), -model.energy_shift(t)};
    case PauliBasisLabel::SigmaPlus: return {-model.rate(t), model.energy_shift(t)};
    default: return {};
    }
}

struct GeneratorCheckOptions {
    double step = 1e-5;   // central-difference step in units of the model time scale
    OperatorPair operators = kLoweringRaising;
    DensityMatrix2 rho0 = DensityMatrix2::plus();
};

/// Checks d/dt2 <A(t2) B(t1)>_qrt = G_AA(t2) <A(t2) B(t1)>_qrt along t2 in t_grid
/// with t1 = t_grid.front(). The derivative comes from central differences of the
/// regression correlation (built from gamma); G comes from the model's rate and
/// frequency. Returns the largest residual relative to max|C| / time_scale.
inline double qrt_generator_check(const DephasingModel& model, std::span<const double> t_grid,
                                  const GeneratorCheckOptions& opt = {}) {
    if (t_grid.size() < 2) throw InvalidArgument("qrt_generator_check: need at least 2 times");
    const double t1 = t_grid.front();
    const double h = opt.step * model.time_scale();
    double worst = 0.0;
    double norm = 0.0;
    for (double t2 : t_grid) {
        auto corr = [&](double t) {
            return detail::qrt_unchecked(model, opt.rho0, opt.operators, t1, t);
        };
        const cplx c = corr(t2);
        // second-order one-sided difference where the backward point would be negative
        const cplx fd = (t2 - h >= 0.0)
                            ? (corr(t2 + h) - corr(t2 - h)) / (2.0 * h)
                            : (-3.0 * c + 4.0 * corr(t2 + h) - corr(t2 + 2.0 * h)) / (2.0 * h);
        const cplx rhs = generator_diagonal(model, opt.operators.first, t2) * c;
        worst = std::max(worst, std::abs(fd - rhs));
        norm = std::max(norm, std::abs(c) / model.time_scale());
    }
    return norm > 0.0 ? worst / norm : worst;
}

} // namespace dephase
