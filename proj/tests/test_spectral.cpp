#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <numbers>

#include "dephase/spectral.hpp"

using namespace dephase;

TEST(SpectralDensity, PointValues) {
    const OhmicFamilySpectralDensity ohmic{1.0, 1.0, 1.0};
    EXPECT_EQ(evaluate_spectral_density(ohmic, 0.0), 0.0);
    EXPECT_NEAR(evaluate_spectral_density(ohmic, 1.0), std::exp(-1.0), 1e-16);
    EXPECT_NEAR(evaluate_spectral_density(ohmic, 1.0), 0.367879, 5e-7);
    const OhmicFamilySpectralDensity j{2.0, 3.0, 2.0};
    EXPECT_NEAR(evaluate_spectral_density(j, 2.0), 4.0 * std::exp(-1.0), 1e-15);
    EXPECT_NEAR(evaluate_spectral_density(j, 2.0), 1.471518, 5e-7);
}

TEST(SpectralDensity, Validation) {
    EXPECT_THROW(OhmicFamilySpectralDensity(-1.0, 3.0, 1.0), InvalidArgument);
    EXPECT_THROW(OhmicFamilySpectralDensity(1.0, 0.0, 1.0), InvalidArgument);
    EXPECT_THROW(OhmicFamilySpectralDensity(1.0, 3.0, 0.0), InvalidArgument);
    EXPECT_THROW(evaluate_spectral_density({1.0, 3.0, 1.0}, -0.1), InvalidArgument);
    // the decoupled limit is a valid model
    EXPECT_EQ(evaluate_spectral_density({0.0, 3.0, 1.0}, 2.0), 0.0);
}

TEST(SpectralDensity, DecaysPastCutoff) {
    for (double s : {0.5, 1.0, 2.0, 3.0, 4.5, 6.0}) {
        const OhmicFamilySpectralDensity sd{1.0, s, 1.5};
        const double peak = evaluate_spectral_density(sd, s * sd.cutoff());
        EXPECT_LT(evaluate_spectral_density(sd, 50.0 * sd.cutoff()), 1e-12 * peak) << s;
    }
}

TEST(SpectralDensity, FirstMoment) {
    // int_0^inf J = lambda Gamma(s+1) Omega^2; the part past 200 Omega is below 1e-80
    boost::math::quadrature::tanh_sinh<double> ts;
    for (double s : {1.0, 2.5, 3.0}) {
        const OhmicFamilySpectralDensity sd{0.7, s, 1.3};
        const double v = ts.integrate(
            [&](double w) { return evaluate_spectral_density(sd, w); }, 0.0,
            200.0 * sd.cutoff());
        EXPECT_NEAR(v, 0.7 * std::tgamma(s + 1.0) * 1.3 * 1.3, 1e-10 * v);
    }
}

TEST(Lorentzian, PointValues) {
    const LorentzianComponent c{1.0, 0.0, 1.0};
    EXPECT_NEAR(evaluate_lorentzian(c, 0.0), 1.0 / std::numbers::pi, 1e-16);
    EXPECT_NEAR(evaluate_lorentzian(c, 0.0), 0.318310, 5e-7);
    const LorentzianComponent d{1.0, 2.0, 0.5};
    const double peak = evaluate_lorentzian(d, 2.0);
    EXPECT_NEAR(evaluate_lorentzian(d, 2.5), 0.5 * peak, 1e-15);
    EXPECT_NEAR(evaluate_lorentzian(d, 1.5), 0.5 * peak, 1e-15);

    // equal-weight pair, midway between equal-width peaks
    const double dw0 = 3.0, dw = 0.7;
    const auto pair = LorentzianMixture::pair(1.0, {0, 0.0, dw}, {0, dw0, dw}, 1.0);
    const double mid = 0.5 * dw0;
    const double expect = 2.0 * 0.5 * dw / (std::numbers::pi * (0.25 * dw0 * dw0 + dw * dw));
    EXPECT_NEAR(evaluate_frequency_distribution(pair, mid), expect, 1e-15);
}

TEST(Lorentzian, MixtureIsSumOfComponents) {
    const LorentzianMixture m{{{0.2, -1.0, 0.3}, {0.5, 0.5, 1.0}, {0.3, 4.0, 2.0}}, 1.0};
    for (double w = -10.0; w <= 10.0; w += 0.37) {
        double sum = 0.0;
        for (const auto& c : m.components()) sum += evaluate_lorentzian(c, w);
        EXPECT_NEAR(evaluate_frequency_distribution(m, w), sum, 1e-15);
    }
}

TEST(Lorentzian, NormalizedDistribution) {
    // quadrature over +-1e4 widths around the mixture, plus the analytic
    // Lorentzian tails beyond that window
    const LorentzianMixture m{{{0.25, -2.0, 0.5}, {0.75, 3.0, 1.5}}, 1.0};
    const double lo = -2.0 - 1e4 * 0.5;
    const double hi = 3.0 + 1e4 * 1.5;
    auto f = [&](double w) { return evaluate_frequency_distribution(m, w); };
    double inside = 0.0;
    // panels doubling in width away from each peak
    std::vector<double> knots{lo, hi};
    for (const auto& c : m.components()) {
        knots.push_back(c.center);
        for (double d = c.width; d < 2e4; d *= 2.0) {
            knots.push_back(c.center - d);
            knots.push_back(c.center + d);
        }
    }
    std::erase_if(knots, [&](double x) { return x < lo || x > hi; });
    std::sort(knots.begin(), knots.end());
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        inside += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, knots[i],
                                                                              knots[i + 1], 15, 1e-14);
    double tails = 0.0;
    for (const auto& c : m.components()) {
        auto cdf = [&](double w) { return 0.5 + std::atan((w - c.center) / c.width) / std::numbers::pi; };
        tails += c.weight * (cdf(lo) + 1.0 - cdf(hi));
    }
    EXPECT_NEAR(inside + tails, 1.0, 1e-8);
}

TEST(Lorentzian, MixtureValidation) {
    EXPECT_THROW(LorentzianMixture({}, 1.0), InvalidArgument);
    EXPECT_THROW(LorentzianMixture({{0.5, 0.0, 1.0}}, 1.0), InvalidArgument);
    EXPECT_THROW(LorentzianMixture({{1.0, 0.0, 0.0}}, 1.0), InvalidArgument);
    EXPECT_THROW(LorentzianMixture({{1.5, 0.0, 1.0}, {-0.5, 0.0, 1.0}}, 1.0), InvalidArgument);
    EXPECT_THROW(LorentzianMixture::pair(0.0, {0, 0, 1}, {0, 0, 1}, 1.0), InvalidArgument);
    const auto p = LorentzianMixture::pair(2.0, {0, 1, 1}, {0, 0, 1}, 1.0);
    EXPECT_NEAR(p.ratio(), 2.0, 1e-15);
    EXPECT_NEAR(p.components()[0].weight + p.components()[1].weight, 1.0, 1e-16);
    EXPECT_THROW(LorentzianMixture::single(0, 1, 1).ratio(), InvalidArgument);
}
