// quadrature.hpp: panelled Gauss-Kronrod integration of oscillatory transforms on [0, W]

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dephase/errors.hpp"

namespace dephase::quadrature {

struct PanelSchedule {
    double unit;          // knot spacing (the cutoff frequency)
    int knots;            // number of unit-spaced knots
    double max_width;     // panel width cap; <= 0 means uncapped
};

struct Result {
    double value{0.0};
    double error{0.0};    // accumulated per-panel error estimate
    double l1{0.0};       // integral of |f|, for relative tolerance checks
    int panels{0};
};

/// Integrates f over [0, knots*unit], splitting at each unit knot and further
/// subdividing panels wider than max_width. Each panel is refined adaptively
/// (G7/K15) to panel_tol relative to the panel's L1 norm.
template <class F>
Result integrate_panels(F&& f, const PanelSchedule& sched, double panel_tol = 1e-10,
                        unsigned max_depth = 20) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    Result out;
    for (int k = 0; k < sched.knots; ++k) {
        const double a = k * sched.unit;
        const double b = (k + 1) * sched.unit;
        int pieces = 1;
        if (sched.max_width > 0.0)
            pieces = std::max(1, static_cast<int>(std::ceil((b - a) / sched.max_width)));
        const double h = (b - a) / pieces;
        for (int p = 0; p < pieces; ++p) {
            const double lo = a + p * h;
            const double hi = (p + 1 == pieces) ? b : lo + h;
            double err = 0.0;
            double l1 = 0.0;
            const double v = GK::integrate(f, lo, hi, max_depth, panel_tol, &err, &l1);
            out.value += v;
            out.error += err;
            out.l1 += l1;
            ++out.panels;
        }
    }
    return out;
}

/// Bound on int_W^inf w^p exp(-w/unit) dw, valid for W > 2 p unit.
inline double exponential_tail_bound(double power, double unit, double upper) {
    return 2.0 * unit * std::pow(upper, power) * std::exp(-upper / unit);
}

} // namespace dephase::quadrature
