#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <numbers>

#include "dephase/measures.hpp"
#include "support.hpp"

using namespace dephase;
using testing_support::linspace;

namespace {

DephasingModel sb(double lambda, double s) { return DephasingModel::spin_boson({lambda, s, 1.0}); }

SignIntervalSet scan(const DephasingModel& m) {
    return find_negative_rate_intervals(m, default_horizon(m));
}

double blp3(double l) { return std::exp(-l) - std::exp(-9.0 * l / 8.0); }
double blp4(double l) { return std::exp(-2.0 * l) - std::exp(-2.5 * l); }

// Zeros of D_s: tan(k pi / s) for k pi / s < pi / 2.
std::vector<double> expected_zeros(double s) {
    std::vector<double> z;
    for (int k = 1; k * std::numbers::pi / s < 0.5 * std::numbers::pi - 1e-12; ++k)
        z.push_back(std::tan(k * std::numbers::pi / s));
    return z;
}

} // namespace

TEST(Intervals, SubOhmicToOhmicAreEmpty) {
    for (double s : {0.5, 1.0, 1.5, 2.0})
        for (double lambda : {0.1, 1.0, 3.0}) {
            const auto iv = scan(sb(lambda, s));
            EXPECT_TRUE(iv.empty()) << s;
            EXPECT_FALSE(iv.tail_unclassified);
        }
}

TEST(Intervals, CubicHasOneOpenInterval) {
    const auto iv = scan(sb(1.0, 3.0));
    ASSERT_EQ(iv.intervals.size(), 1u);
    EXPECT_NEAR(iv.intervals[0].begin, std::sqrt(3.0), 1e-10);
    EXPECT_TRUE(iv.intervals[0].open_ended);
    EXPECT_TRUE(iv.tail_open);
}

TEST(Intervals, QuarticStartsAtOneAndStaysNegative) {
    // D_4 ~ -6/t^3 at large t, so the single interval is open-ended
    const auto iv = scan(sb(1.0, 4.0));
    ASSERT_EQ(iv.intervals.size(), 1u);
    EXPECT_NEAR(iv.intervals[0].begin, 1.0, 1e-10);
    EXPECT_TRUE(iv.intervals[0].open_ended);
    EXPECT_LT(dephasing_rate_closed({1, 4, 1}, 1e3), 0.0);
}

TEST(Intervals, EndpointsAreZerosOfTheRate) {
    for (double s : {3.0, 4.0, 5.0, 5.5, 7.0, 8.0}) {
        const auto model = sb(1.0, s);
        const auto iv = scan(model);
        std::vector<double> found;
        for (const auto& i : iv.intervals) {
            if (i.begin > 0.0) found.push_back(i.begin);
            if (!i.open_ended) found.push_back(i.end);
        }
        const auto want = expected_zeros(s);
        ASSERT_EQ(found.size(), want.size()) << s;
        for (std::size_t k = 0; k < want.size(); ++k) EXPECT_NEAR(found[k], want[k], 1e-10) << s;
        for (std::size_t k = 1; k < iv.intervals.size(); ++k)
            EXPECT_GT(iv.intervals[k].begin, iv.intervals[k - 1].end);
        for (const auto& i : iv.intervals) {
            const double mid = i.open_ended ? i.begin + 1.0 : 0.5 * (i.begin + i.end);
            EXPECT_LT(model.rate(mid), 0.0);
        }
    }
}

TEST(Intervals, FlagsUnclassifiedTailAndBadHorizon) {
    DephasingModel::Custom c;
    c.gamma = [](double) { return cplx(1.0); };
    c.energy_shift = [](double) { return 0.0; };
    c.rate = [](double t) { return t < 2.0 ? std::sin(t) : 0.0; };
    const auto iv = find_negative_rate_intervals(DephasingModel::custom(c), 10.0);
    EXPECT_TRUE(iv.tail_unclassified);
    EXPECT_THROW(find_negative_rate_intervals(DephasingModel::custom(c), 0.0), InvalidArgument);
}

TEST(Measures, ClosedFormsForCubicAndQuartic) {
    for (double l : {0.25, 0.5, 1.0, 2.0}) {
        const auto m3 = compute_measures(sb(l, 3.0));
        const auto m4 = compute_measures(sb(l, 4.0));
        EXPECT_NEAR(m3.blp.value, blp3(l), 1e-8);
        EXPECT_NEAR(m3.rhp.value, l / 8.0, 1e-8);
        EXPECT_NEAR(m4.blp.value, blp4(l), 1e-8);
        EXPECT_NEAR(m4.rhp.value, l / 2.0, 1e-8);
        EXPECT_FALSE(m3.blp.lower_bound || m3.rhp.lower_bound || m4.blp.lower_bound);
    }
    EXPECT_NEAR(compute_measures(sb(1, 3)).blp.value, 0.043227, 5e-7);
    EXPECT_NEAR(compute_measures(sb(1, 4)).blp.value, 0.053250, 5e-7);
}

TEST(Measures, VanishExactlyForSOneAndTwo) {
    for (double s : {1.0, 2.0})
        for (double l : linspace(0.03, 3.0, 100)) {
            const auto m = compute_measures(sb(l, s));
            EXPECT_EQ(m.blp.value, 0.0);
            EXPECT_EQ(m.rhp.value, 0.0);
        }
}

TEST(Measures, MarkovianityDefinitionsAgreeForSpinBoson) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> ls(0.01, 3.0), ss(0.5, 7.0);
    for (int i = 0; i < 200; ++i) {
        const auto m = compute_measures(sb(ls(rng), ss(rng)));
                EXPECT_EQ(m.blp.value > 0.0, m.rhp.value > 0.0);
    }
}

TEST(Measures, RhpNondecreasingInCoupling) {
    for (double s : {3.0, 4.0, 5.0}) {
        double prev = -1.0;
        for (double l : linspace(0.02, 2.0, 100)) {
            const double v = compute_measures(sb(l, s)).rhp.value;
            EXPECT_GE(v, prev);
            prev = v;
        }
    }
}

TEST(Measures, BlpPeakForCubicSpectrum) {
    double best = -1.0, arg = 0.0;
    for (int i = 1; i <= 300; ++i) {
        const double l = 0.01 * i;
        const double v = compute_measures(sb(l, 3.0)).blp.value;
        if (v > best) best = v, arg = l;
    }
    EXPECT_NEAR(arg, 8.0 * std::log(9.0 / 8.0), 0.01);
}

TEST(Measures, TruncatedTailIsALowerBound) {
    // |gamma| = 1 - t exp(-t/5)/2 dips and recovers, so D < 0 from t = 5 onwards
    // and the model offers no limit for the open interval
    DephasingModel::Custom c;
    c.gamma = [](double t) { return cplx(1.0 - 0.5 * t * std::exp(-t / 5.0)); };
    c.rate = [](double t) {
        return 0.5 * std::exp(-t / 5.0) * (1.0 - t / 5.0) / (1.0 - 0.5 * t * std::exp(-t / 5.0));
    };
    c.energy_shift = [](double) { return 0.0; };
    const auto model = DephasingModel::custom(c);
    const auto m = compute_measures(model, 30.0);
    EXPECT_TRUE(m.blp.lower_bound);
    EXPECT_TRUE(m.rhp.lower_bound);
    EXPECT_NEAR(m.blp.value, std::abs(model.gamma(30.0)) - std::abs(model.gamma(5.0)), 1e-9);

    c.abs_gamma_limit = 0.5;
    const auto limited = compute_measures(DephasingModel::custom(c), 30.0);
    EXPECT_FALSE(limited.blp.lower_bound);
}

TEST(RhpRate, Values) {
    for (double t : linspace(0.0, 10.0, 41)) EXPECT_EQ(rhp_rate(sb(1, 2), t), 0.0);
    EXPECT_NEAR(rhp_rate(sb(1, 3), std::sqrt(3.0)), 0.0, 1e-15);
    // D_3(3) = 2 Im[(1+3i)^3] / 10^3
    const std::complex<double> z = std::pow(std::complex<double>(1.0, 3.0), 3);
    EXPECT_NEAR(rhp_rate(sb(1, 3), 3.0), -2.0 * z.imag() / 1000.0, 1e-15);
    EXPECT_NEAR(rhp_rate(sb(1, 3), 3.0), 0.036, 1e-15);
}

TEST(Choi, TraceNormMatchesEigensolver) {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (double s : {2.0, 3.0, 4.0, 5.5}) {
        const auto model = DephasingModel::spin_boson({1.0, s, 1.0}, 0.9);
        for (int i = 0; i < 30; ++i) {
            const auto m = propagator_choi_matrix(model, u(rng), 1e-4);
            Eigen::Matrix4cd e;
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) e(r, c) = m[static_cast<std::size_t>(4 * r + c)];
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(e);
            EXPECT_NEAR(choi_trace_norm(m), es.eigenvalues().cwiseAbs().sum(), 1e-13);
        }
    }
    ChoiMatrix bad{};
    bad[1] = 1.0;
    EXPECT_THROW(choi_trace_norm(bad), InvalidArgument);
}

TEST(Choi, NumericRateConvergesToRhpRate) {
    EXPECT_NEAR(choi_g_numeric(sb(1, 3), 3.0, 1e-5), 0.036, 1e-3);
    for (double t : linspace(0.0, 10.0, 21)) {
        EXPECT_NEAR(choi_g_numeric(sb(1, 2), t, 1e-5), 0.0, 1e-9);
        EXPECT_NEAR(choi_g_numeric(sb(1, 4), t, 1e-5), rhp_rate(sb(1, 4), t), 1e-3);
    }
    const auto semigroup = DephasingModel::photonic(PhotonicModel{LorentzianMixture::single(1, 1, 1)});
    for (double t : linspace(0.0, 10.0, 21)) EXPECT_NEAR(choi_g_numeric(semigroup, t, 1e-5), 0.0, 1e-9);
    EXPECT_THROW(choi_g_numeric(sb(1, 3), 1.0, 1e-2), InvalidArgument);
    EXPECT_THROW(choi_g_numeric(sb(1, 3), 1.0, 1e-8), InvalidArgument);
}

TEST(TraceDistanceEvolution, Values) {
    const auto model = sb(1.0, 3.0);
    const auto p = DensityMatrix2::plus();
    const auto m = DensityMatrix2::minus();
    for (double t : linspace(0.0, 10.0, 51)) {
        EXPECT_EQ(trace_distance_evolution(model, p, p, t), 0.0);
        EXPECT_NEAR(trace_distance_evolution(model, p, m, t), std::abs(model.gamma(t)), 1e-12);
        EXPECT_EQ(trace_distance_evolution(model, DensityMatrix2::diagonal(1, 0),
                                           DensityMatrix2::diagonal(0, 1), t),
                  1.0);
        EXPECT_NEAR(trace_distance_evolution(model, p, m, t),
                    trace_distance(evolve_exact(model, p, t), evolve_exact(model, m, t)), 1e-15);
    }
    EXPECT_EQ(trace_distance_evolution(model, p, m, 0.0), 1.0);
}

TEST(TraceDistanceEvolution, IntegratedRisesEqualBlp) {
    for (double s : {3.0, 4.0, 5.5}) {
        const auto model = sb(0.8, s);
        // fine linear grid, then geometric to t = 1e6 where |gamma| sits at its limit
        auto times = linspace(0.0, 20.0, 200001);
        for (double t = 20.0 * 1.001; t < 1e6; t *= 1.001) times.push_back(t);
        double rises = 0.0;
        double prev = 1.0;
        for (double t : times) {
            const double d = trace_distance_evolution(model, DensityMatrix2::plus(),
                                                      DensityMatrix2::minus(), t);
            rises += std::max(0.0, d - prev);
            prev = d;
        }
        EXPECT_NEAR(rises, compute_measures(model).blp.value, 1e-8) << s;
    }
}

TEST(PairSearch, EquatorialPairIsOptimal) {
    for (double s : {3.0, 4.0}) {
        const auto model = sb(1.0, s);
        const auto iv = scan(model);
        const auto best = blp_pair_search(model, iv);
        EXPECT_NEAR(best.blp, blp_measure(model, iv).value, 1e-14);
        EXPECT_NEAR(best.theta, 0.5 * std::numbers::pi, 1e-14);
    }
}
