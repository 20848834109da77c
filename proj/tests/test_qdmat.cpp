#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "dephase/qdmat.hpp"
#include "support.hpp"

using namespace dephase;
using testing_support::entropy_of;
using testing_support::random_gamma;
using testing_support::random_state;

namespace {

Eigen::Matrix2cd to_eigen(const DensityMatrix2& r) {
    Eigen::Matrix2cd m;
    m << r.rho00(), r.rho01(), r.rho10(), r.rho11();
    return m;
}

// Trace distance from a general Hermitian eigensolver.
double eigen_trace_distance(const DensityMatrix2& a, const DensityMatrix2& b) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(to_eigen(a) - to_eigen(b));
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

} // namespace

TEST(DensityMatrix, RejectsInvalidStates) {
    EXPECT_THROW(DensityMatrix2(0.6, 0.6, 0.0), InvalidArgument);
    EXPECT_THROW(DensityMatrix2(1.2, -0.2, 0.0), InvalidArgument);
    EXPECT_THROW(DensityMatrix2(0.5, 0.5, cplx(0.6, 0.0)), InvalidArgument);
    EXPECT_THROW(DensityMatrix2(0.5, 0.5, cplx(NAN, 0.0)), InvalidArgument);
    EXPECT_THROW(DensityMatrix2::pure(1.0, 1.0), InvalidArgument);
}

TEST(DensityMatrix, ClampsWithinTolerance) {
    const DensityMatrix2 r{0.5, 0.5, cplx(0.5 + 1e-13, 0.0)};
    EXPECT_LE(std::norm(r.rho01()), r.rho00() * r.rho11());
    const DensityMatrix2 q{1.0 + 5e-13, -5e-13, 0.0};
    EXPECT_EQ(q.rho11(), 0.0);
}

TEST(TraceDistance, Examples) {
    const auto mixed = DensityMatrix2::diagonal(0.5, 0.5);
    EXPECT_EQ(trace_distance(mixed, mixed), 0.0);
    EXPECT_DOUBLE_EQ(trace_distance(DensityMatrix2::diagonal(1, 0), DensityMatrix2::diagonal(0, 1)),
                     1.0);
    const auto p = dephase_evolve(DensityMatrix2::plus(), 0.5, 0.0, 0.0);
    const auto m = dephase_evolve(DensityMatrix2::minus(), 0.5, 0.0, 0.0);
    EXPECT_NEAR(trace_distance(p, m), 0.5, 1e-15);
}

TEST(TraceDistance, MatchesGeneralEigensolver) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        const auto a = random_state(rng);
        const auto b = random_state(rng);
        EXPECT_NEAR(trace_distance(a, b), eigen_trace_distance(a, b), 1e-14);
    }
}

TEST(TraceDistance, IsAMetric) {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 2000; ++i) {
        const auto a = random_state(rng);
        const auto b = random_state(rng);
        const auto c = random_state(rng);
        const double ab = trace_distance(a, b);
        EXPECT_GE(ab, 0.0);
        EXPECT_LE(ab, 1.0);
        EXPECT_EQ(ab, trace_distance(b, a));
        EXPECT_EQ(trace_distance(a, a), 0.0);
        EXPECT_LE(trace_distance(a, c), ab + trace_distance(b, c) + 1e-15);
    }
}

TEST(TraceDistance, ContractsUnderDephasing) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const auto a = random_state(rng);
        const auto b = random_state(rng);
        const cplx g1 = random_gamma(rng);
        const cplx g2 = g1 * u(rng);   // |g2| <= |g1|
        const double t = 3.0 * u(rng);
        const double d0 = trace_distance(a, b);
        const double d1 = trace_distance(dephase_evolve(a, g1, 0.7, t), dephase_evolve(b, g1, 0.7, t));
        const double d2 = trace_distance(dephase_evolve(a, g2, 0.7, t), dephase_evolve(b, g2, 0.7, t));
        EXPECT_LE(d1, d0 + 1e-15);
        EXPECT_LE(d2, d1 + 1e-15);
    }
}

TEST(TraceDistance, DephasedPairFormula) {
    std::mt19937_64 rng(14);
    for (int i = 0; i < 500; ++i) {
        const auto a = random_state(rng);
        const auto b = random_state(rng);
        const cplx g = random_gamma(rng);
        const double dp = a.rho00() - b.rho00();
        const double dc = std::abs(a.rho01() - b.rho01());
        const double expect = std::sqrt(dp * dp + dc * dc * std::norm(g));
        EXPECT_NEAR(trace_distance(dephase_evolve(a, g, 0.0, 0.0), dephase_evolve(b, g, 0.0, 0.0)),
                    expect, 1e-14);
    }
}

TEST(DephaseEvolve, Examples) {
    const DensityMatrix2 r{0.3, 0.7, cplx(0.2, -0.1)};
    EXPECT_EQ(dephase_evolve(r, 1.0, 2.0, 0.0), r);
    const auto full = dephase_evolve(r, 0.0, 1.0, 1.0);
    EXPECT_EQ(full.rho01(), cplx{});
    EXPECT_EQ(full.rho00(), 0.3);
    EXPECT_NEAR(std::abs(dephase_evolve(DensityMatrix2::plus(), 0.3, 0.0, 5.0).rho01() - 0.15), 0.0,
                1e-16);
    // free rotation: rho01 picks up exp(-i omega_s t)
    const auto rot = dephase_evolve(DensityMatrix2::plus(), 1.0, 2.0, 0.25);
    EXPECT_NEAR(std::abs(rot.rho01() - 0.5 * std::polar(1.0, -0.5)), 0.0, 1e-15);
}

TEST(DephaseEvolve, RejectsUnphysicalGamma) {
    EXPECT_THROW(dephase_evolve(DensityMatrix2::plus(), 1.0 + 1e-9, 0.0, 0.0), InvalidArgument);
    EXPECT_NO_THROW(dephase_evolve(DensityMatrix2::plus(), 1.0 + 1e-13, 0.0, 0.0));
}

TEST(DephaseEvolve, PreservesStateInvariants) {
    std::mt19937_64 rng(15);
    for (int i = 0; i < 2000; ++i) {
        const auto a = random_state(rng);
        const auto e = dephase_evolve(a, random_gamma(rng), 1.3, 0.4 * i);
        EXPECT_EQ(e.rho00(), a.rho00());
        EXPECT_EQ(e.rho11(), a.rho11());
        EXPECT_LE(std::norm(e.rho01()), e.rho00() * e.rho11() + 1e-15);
        const auto [lo, hi] = e.eigenvalues();
        EXPECT_GE(lo, -1e-15);
        EXPECT_LE(hi, 1.0 + 1e-15);
    }
}

TEST(Entropy, Examples) {
    EXPECT_EQ(von_neumann_entropy(DensityMatrix2::diagonal(1, 0)), 0.0);
    EXPECT_NEAR(von_neumann_entropy(DensityMatrix2::plus()), 0.0, 1e-12);
    EXPECT_NEAR(von_neumann_entropy(DensityMatrix2::diagonal(0.5, 0.5)), std::log(2.0), 1e-15);
    const double h = von_neumann_entropy(DensityMatrix2::diagonal(0.9, 0.1));
    EXPECT_NEAR(h, entropy_of(0.9, 0.1), 1e-15);
    EXPECT_NEAR(h, 0.325083, 5e-7);
}

TEST(Entropy, MatchesEigensolverSpectrum) {
    std::mt19937_64 rng(16);
    for (int i = 0; i < 300; ++i) {
        const auto a = random_state(rng);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(to_eigen(a));
        const auto ev = es.eigenvalues();
        const double h = entropy_of(std::max(ev(0), 0.0), std::max(ev(1), 0.0));
        EXPECT_NEAR(von_neumann_entropy(a), h, 1e-12);
        EXPECT_LE(von_neumann_entropy(a), std::log(2.0) + 1e-15);
    }
}

TEST(PauliBasis, OrthonormalWithAdjointPairs) {
    EXPECT_EQ(kPauliBasis.size(), 4u);
    EXPECT_EQ(adjoint(PauliBasisLabel::SigmaMinus), PauliBasisLabel::SigmaPlus);
    EXPECT_EQ(adjoint(PauliBasisLabel::SigmaPlus), PauliBasisLabel::SigmaMinus);
    EXPECT_EQ(adjoint(PauliBasisLabel::SigmaZ), PauliBasisLabel::SigmaZ);
    for (auto a : kPauliBasis) {
        const Mat2 ma = basis_matrix(a);
        const Mat2 mad = basis_matrix(adjoint(a));
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) EXPECT_EQ(mad(i, j), std::conj(ma(j, i)));
        for (auto b : kPauliBasis) {
            const cplx hs = (mad * basis_matrix(b)).trace();
            EXPECT_NEAR(std::abs(hs - (a == b ? 1.0 : 0.0)), 0.0, 1e-15)
                << to_string(a) << " " << to_string(b);
        }
    }
    // sigma_- = |1><0| lowers the sigma_z = +1 state |0>
    const Mat2 sm = basis_matrix(PauliBasisLabel::SigmaMinus);
    EXPECT_EQ(sm(1, 0), cplx(1.0));
    EXPECT_EQ(sm(0, 1), cplx(0.0));
}
