// qdmat.hpp: two-level density matrices and the dephasing channel

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include "dephase/errors.hpp"

namespace dephase {

using cplx = std::complex<double>;

/// Tolerance on trace, population range and positivity of a 2x2 state.
inline constexpr double kStateTolerance = 1e-12;

/// Eigenvalues (descending) of the Hermitian matrix [[a, c], [conj(c), d]].
/// Closed-form quadratic; no general eigensolver.
inline std::pair<double, double> hermitian_eigenvalues(double a, double d, cplx c) {
    const double mean = 0.5 * (a + d);
    const double radius = std::hypot(0.5 * (a - d), std::abs(c));
    return {mean + radius, mean - radius};
}

/// General 2x2 complex matrix, row-major. Used for operator products.
struct Mat2 {
    std::array<cplx, 4> m{};

    cplx& operator()(int i, int j) { return m[static_cast<std::size_t>(2 * i + j)]; }
    cplx operator()(int i, int j) const { return m[static_cast<std::size_t>(2 * i + j)]; }

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                r(i, j) = x(i, 0) * y(0, j) + x(i, 1) * y(1, j);
        return r;
    }
    cplx trace() const { return m[0] + m[3]; }
};

/// Two-level density matrix. Basis |0>, |1> with sigma_z|0> = +|0>.
/// Only rho00, rho11 and rho01 are stored; rho10 = conj(rho01).
class DensityMatrix2 {
public:
    /// Maximally mixed state.
    DensityMatrix2() = default;

    /// Validates trace, population range and positivity. Violations within
    /// kStateTolerance are clamped; larger ones throw InvalidArgument.
    DensityMatrix2(double rho00, double rho11, cplx rho01) {
        if (!std::isfinite(rho00) || !std::isfinite(rho11) || !std::isfinite(rho01.real()) ||
            !std::isfinite(rho01.imag()))
            throw InvalidArgument("density matrix: non-finite entry");
        if (std::abs(rho00 + rho11 - 1.0) > kStateTolerance)
            throw InvalidArgument("density matrix: trace differs from 1 by " +
                                  std::to_string(rho00 + rho11 - 1.0));
        if (rho00 < -kStateTolerance || rho11 < -kStateTolerance)
            throw InvalidArgument("density matrix: negative population");
        rho00 = std::clamp(rho00, 0.0, 1.0);
        rho11 = std::clamp(rho11, 0.0, 1.0);
        const double bound = rho00 * rho11;
        const double excess = std::norm(rho01) - bound;
        if (excess > kStateTolerance)
            throw InvalidArgument("density matrix: not positive semidefinite (|rho01|^2 exceeds "
                                  "rho00*rho11 by " + std::to_string(excess) + ")");
        if (excess > 0.0)
            rho01 = (bound > 0.0) ? rho01 * (std::sqrt(bound) / std::abs(rho01)) : cplx{};
        rho00_ = rho00;
        rho11_ = rho11;
        rho01_ = rho01;
    }

    static DensityMatrix2 diagonal(double rho00, double rho11) { return {rho00, rho11, {}}; }

    /// |psi><psi| for psi = a|0> + b|1>; amplitudes must be normalized.
    static DensityMatrix2 pure(cplx a, cplx b) {
        const double n = std::norm(a) + std::norm(b);
        if (std::abs(n - 1.0) > kStateTolerance)
            throw InvalidArgument("pure state: amplitudes not normalized");
        return {std::norm(a), std::norm(b), a * std::conj(b)};
    }

    /// (|0> + |1>)/sqrt2 and (|0> - |1>)/sqrt2.
    static DensityMatrix2 plus() { return {0.5, 0.5, cplx{0.5, 0.0}}; }
    static DensityMatrix2 minus() { return {0.5, 0.5, cplx{-0.5, 0.0}}; }

    double rho00() const noexcept { return rho00_; }
    double rho11() const noexcept { return rho11_; }
    cplx rho01() const noexcept { return rho01_; }
    cplx rho10() const noexcept { return std::conj(rho01_); }

    Mat2 matrix() const {
        Mat2 r;
        r(0, 0) = rho00_;
        r(1, 1) = rho11_;
        r(0, 1) = rho01_;
        r(1, 0) = std::conj(rho01_);
        return r;
    }

    std::pair<double, double> eigenvalues() const {
        return hermitian_eigenvalues(rho00_, rho11_, rho01_);
    }

    friend bool operator==(const DensityMatrix2&, const DensityMatrix2&) = default;

private:
    double rho00_{0.5};
    double rho11_{0.5};
    cplx rho01_{};
};

/// Orthonormal (Hilbert-Schmidt) operator basis {1/sqrt2, sigma_-, sigma_+, sigma_z/sqrt2}.
enum class PauliBasisLabel { Identity, SigmaMinus, SigmaPlus, SigmaZ };

inline constexpr std::array<PauliBasisLabel, 4> kPauliBasis{
    PauliBasisLabel::Identity, PauliBasisLabel::SigmaMinus, PauliBasisLabel::SigmaPlus,
    PauliBasisLabel::SigmaZ};

inline const char* to_string(PauliBasisLabel l) {
    switch (l) {
    case PauliBasisLabel::Identity: return "identity";
    case PauliBasisLabel::SigmaMinus: return "sigma_minus";
    case PauliBasisLabel::SigmaPlus: return "sigma_plus";
    case PauliBasisLabel::SigmaZ: return "sigma_z";
    }
    return "?";
}

/// sigma_- = |1><0| lowers the sigma_z = +1 state; sigma_+ is its adjoint.
inline Mat2 basis_matrix(PauliBasisLabel l) {
    const double r = 1.0 / std::sqrt(2.0);
    Mat2 m;
    switch (l) {
    case PauliBasisLabel::Identity:
        m(0, 0) = r;
        m(1, 1) = r;
        break;
    case PauliBasisLabel::SigmaMinus: m(1, 0) = 1.0; break;
    case PauliBasisLabel::SigmaPlus: m(0, 1) = 1.0; break;
    case PauliBasisLabel::SigmaZ:
        m(0, 0) = r;
        m(1, 1) = -r;
        break;
    }
    return m;
}

inline PauliBasisLabel adjoint(PauliBasisLabel l) {
    if (l == PauliBasisLabel::SigmaMinus) return PauliBasisLabel::SigmaPlus;
    if (l == PauliBasisLabel::SigmaPlus) return PauliBasisLabel::SigmaMinus;
    return l;
}

/// Half the trace norm of a - b.
inline double trace_distance(const DensityMatrix2& a, const DensityMatrix2& b) {
    const auto [hi, lo] = hermitian_eigenvalues(a.rho00() - b.rho00(), a.rho11() - b.rho11(),
                                                a.rho01() - b.rho01());
    return std::min(1.0, 0.5 * (std::abs(hi) + std::abs(lo)));
}

/// Pure-dephasing map: populations fixed, rho01 -> rho01 * gamma * exp(-i omega_s t).
inline DensityMatrix2 dephase_evolve(const DensityMatrix2& rho0, cplx gamma, double omega_s,
                                     double t) {
    if (!(std::abs(gamma) <= 1.0 + kStateTolerance))
        throw InvalidArgument("dephase_evolve: |gamma| = " + std::to_string(std::abs(gamma)) +
                              " exceeds 1");
    const cplx phase = std::polar(1.0, -omega_s * t);
    return {rho0.rho00(), rho0.rho11(), rho0.rho01() * gamma * phase};
}

/// -sum p ln p over the eigenvalues, natural log.
inline double von_neumann_entropy(const DensityMatrix2& rho) {
    const auto [p, q] = rho.eigenvalues();
    double s = 0.0;
    for (double x : {p, q})
        if (x > 0.0) s -= x * std::log(x);
    return std::max(0.0, s);
}

} // namespace dephase
