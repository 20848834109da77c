// measures.hpp: trace-distance (BLP) and CP-divisibility (RHP) non-Markovianity
// measures for pure-dephasing dynamics.
//
// Both measures are accumulated over the time intervals where the dephasing rate
// is negative. Those intervals are located once per model by a bracketing scan
// followed by bisection.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "dephase/errors.hpp"
#include "dephase/model.hpp"
#include "dephase/qdmat.hpp"

namespace dephase {

struct SignInterval {
    double begin;
    double end;          // +inf when open_ended
    bool open_ended = false;
};

/// Ordered, disjoint intervals on which D(t) < 0.
struct SignIntervalSet {
    std::vector<SignInterval> intervals;
    double horizon = 0.0;
    /// The last interval extends past the horizon.
    bool tail_open = false;
    /// D(horizon) was indistinguishable from zero, so the tail sign is unknown.
    bool tail_unclassified = false;

    bool empty() const noexcept { return intervals.empty(); }
};

struct IntervalScanOptions {
    int steps = 4000;
    double root_tol = 1e-11;       // bracket width at which bisection stops
    int refine = 64;               // sub-samples inside cells around local extrema
    double noise_rel = 1e-13;      // |D(horizon)| below this fraction of max|D| is unclassified
};

/// Default scan horizon: 50 model time units.
inline double default_horizon(const DephasingModel& model) { return 50.0 * model.time_scale(); }

namespace detail {

inline int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

} // namespace detail

inline SignIntervalSet find_negative_rate_intervals(const DephasingModel& model, double horizon,
                                                    const IntervalScanOptions& opt = {}) {
    if (!(horizon > 0.0)) throw InvalidArgument("interval scan: horizon must be > 0");
    const int n = std::max(opt.steps, 2);
    const double h = horizon / n;

    // coarse samples, then extra samples in the two cells around every interior
    // local extremum so that close pairs of zeros are not stepped over
    std::vector<double> times(static_cast<std::size_t>(n) + 1), values(times.size());
    double scale = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        times[i] = static_cast<double>(i) * h;
        values[i] = model.rate(times[i]);
        scale = std::max(scale, std::abs(values[i]));
    }
    std::vector<std::pair<double, double>> extra;
    for (std::size_t i = 1; i + 1 < times.size(); ++i) {
        if ((values[i] - values[i - 1]) * (values[i + 1] - values[i]) >= 0.0) continue;
        for (int k = 1; k < 2 * opt.refine; ++k) {
            if (k == opt.refine) continue;
            const double t = times[i - 1] + h * k / opt.refine;
            extra.emplace_back(t, model.rate(t));
        }
    }
    if (!extra.empty()) {
        std::vector<std::pair<double, double>> all;
        all.reserve(times.size() + extra.size());
        for (std::size_t i = 0; i < times.size(); ++i) all.emplace_back(times[i], values[i]);
        all.insert(all.end(), extra.begin(), extra.end());
        std::sort(all.begin(), all.end());
        all.erase(std::unique(all.begin(), all.end(),
                              [](const auto& a, const auto& b) { return a.first == b.first; }),
                  all.end());
        times.resize(all.size());
        values.resize(all.size());
        for (std::size_t i = 0; i < all.size(); ++i) {
            times[i] = all[i].first;
            values[i] = all[i].second;
        }
    }

    SignIntervalSet out;
    out.horizon = horizon;
    auto f = [&](double t) { return model.rate(t); };
    auto tol = [&](double a, double b) { return std::abs(b - a) <= opt.root_tol; };
    auto locate = [&](std::size_t lo, std::size_t hi) {
        // values[lo] and values[hi] have opposite nonzero signs; an exact zero in
        // between is the root
        for (std::size_t k = lo + 1; k < hi; ++k)
            if (values[k] == 0.0) return times[k];
        const auto r = boost::math::tools::bisect(f, times[lo], times[hi], tol);
        return 0.5 * (r.first + r.second);
    };

    int prev_sign = 0;
    std::size_t prev_index = 0;
    bool open = false;
    double open_start = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const int sg = detail::sign_of(values[k]);
        if (sg == 0) continue;
        if (prev_sign == 0) {
            open = sg < 0;
        } else if (sg != prev_sign) {
            const double root = locate(prev_index, k);
            if (sg < 0) {
                open = true;
                open_start = root;
            } else if (open) {
                out.intervals.push_back({open_start, root, false});
                open = false;
            }
        }
        prev_sign = sg;
        prev_index = k;
    }
    const double tail = values.back();
    if (std::abs(tail) <= opt.noise_rel * scale) out.tail_unclassified = true;
    if (open) {
        out.intervals.push_back({open_start, std::numeric_limits<double>::infinity(), true});
        out.tail_open = true;
    }
    return out;
}


/// A measure value; lower_bound is set when an open-ended interval had to be
/// truncated at the scan horizon because no analytic limit of |gamma| exists.
struct MeasureValue {
    double value = 0.0;
    bool lower_bound = false;
};

struct MeasurePair {
    MeasureValue blp;
    MeasureValue rhp;
};

namespace detail {

/// Endpoint value of |gamma| (or ln|gamma|) for an interval end that may be infinite.
template <class AtTime, class AtInfinity>
double interval_end_value(const SignInterval& iv, const SignIntervalSet& set, AtTime&& at,
                          AtInfinity&& at_inf, bool& truncated) {
    if (!iv.open_ended) return at(iv.end);
    if (auto v = at_inf()) return *v;
    truncated = true;
    return at(set.horizon);
}

} // namespace detail

/// BLP measure for the optimal pair |psi+>, |psi->: sum_m |gamma(b_m)| - |gamma(a_m)|.
inline MeasureValue blp_measure(const DephasingModel& model, const SignIntervalSet& intervals) {
    MeasureValue out;
    for (const auto& iv : intervals.intervals) {
        const double end = detail::interval_end_value(
            iv, intervals, [&](double t) { return std::abs(model.gamma(t)); },
            [&] { return model.abs_gamma_limit(); }, out.lower_bound);
        out.value += end - std::abs(model.gamma(iv.begin));
    }
    out.value = std::max(out.value, 0.0);
    return out;
}

/// RHP measure: sum_m ln|gamma(b_m)| - ln|gamma(a_m)|, i.e. the integral of max(0, -D).
inline MeasureValue rhp_measure(const DephasingModel& model, const SignIntervalSet& intervals) {
    MeasureValue out;
    for (const auto& iv : intervals.intervals) {
        const double end = detail::interval_end_value(
            iv, intervals, [&](double t) { return model.log_abs_gamma(t); },
            [&]() -> std::optional<double> {
                if (const auto* b = std::get_if<DephasingModel::SpinBosonClosed>(&model.backend()))
                    if (b->sd.s() > 1.0) return log_decoherence_limit(b->sd);
                if (auto lim = model.abs_gamma_limit()) return std::log(*lim);
                return std::nullopt;
            },
            out.lower_bound);
        out.value += end - model.log_abs_gamma(iv.begin);
    }
    out.value = std::max(out.value, 0.0);
    return out;
}

inline MeasurePair compute_measures(const DephasingModel& model, double horizon,
                                    const IntervalScanOptions& opt = {}) {
    const auto iv = find_negative_rate_intervals(model, horizon, opt);
    return {blp_measure(model, iv), rhp_measure(model, iv)};
}

inline MeasurePair compute_measures(const DephasingModel& model) {
    return compute_measures(model, default_horizon(model));
}

/// g(t) = max(0, -D(t)): the CP-divisibility violation rate of a single dephasing channel.
inline double rhp_rate(const DephasingModel& model, double t) {
    return std::max(0.0, -model.rate(t));
}

/// 4x4 Choi matrix, row-major in the basis |system> (x) |ancilla>.
using ChoiMatrix = std::array<cplx, 16>;

/// Choi matrix of the propagator Lambda(t + eps, t), which multiplies rho01 by
/// c = gamma(t + eps)/gamma(t) exp(-i omega_s eps) and leaves populations fixed.
inline ChoiMatrix propagator_choi_matrix(const DephasingModel& model, double t, double epsilon) {
    const cplx g0 = model.gamma(t);
    if (std::abs(g0) < kSingularGamma)
        throw IllConditioned("Choi matrix: |gamma(t)| vanishes, propagator undefined");
    const cplx c = model.gamma(t + epsilon) / g0 * std::polar(1.0, -model.omega_s() * epsilon);
    // sum_ij Lambda(|i><j|) (x) |i><j|; index 2a + b for |a>_S |b>_A
    ChoiMatrix m{};
    m[0 * 4 + 0] = 1.0;
    m[3 * 4 + 3] = 1.0;
    m[0 * 4 + 3] = c;
    m[3 * 4 + 0] = std::conj(c);
    return m;
}

/// Trace norm of a dephasing Choi matrix. The matrix is block diagonal on
/// {|00>, |11>} and {|01>, |10>}, so each block is diagonalized in closed form.
inline double choi_trace_norm(const ChoiMatrix& m) {
    auto at = [&](int i, int j) { return m[static_cast<std::size_t>(4 * i + j)]; };
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const bool outer = (i == 0 || i == 3) && (j == 0 || j == 3);
            const bool inner = (i == 1 || i == 2) && (j == 1 || j == 2);
            if (!outer && !inner && at(i, j) != cplx{})
                throw InvalidArgument("choi_trace_norm: matrix is not of dephasing form");
        }
    const auto [a, b] = hermitian_eigenvalues(at(0, 0).real(), at(3, 3).real(), at(0, 3));
    const auto [c, d] = hermitian_eigenvalues(at(1, 1).real(), at(2, 2).real(), at(1, 2));
    return std::abs(a) + std::abs(b) + std::abs(c) + std::abs(d);
}

/// Finite-step estimate (||Choi||_1 / 2 - 1) / eps of the CP-divisibility violation rate.
inline double choi_g_numeric(const DephasingModel& model, double t, double epsilon) {
    const double ts = model.time_scale();
    if (!(epsilon >= 1e-6 * ts && epsilon <= 1e-3 * ts))
        throw InvalidArgument("choi_g_numeric: epsilon must lie in [1e-6, 1e-3] time scales");
    return (0.5 * choi_trace_norm(propagator_choi_matrix(model, t, epsilon)) - 1.0) / epsilon;
}

/// D(t, rho1, rho2) = sqrt(dp^2 + |dc|^2 |gamma(t)|^2).
inline double trace_distance_evolution(const DephasingModel& model, const DensityMatrix2& rho1,
                                       const DensityMatrix2& rho2, double t) {
    const double dp = rho1.rho00() - rho2.rho00();
    const double dc = std::abs(rho1.rho01() - rho2.rho01());
    const double g = std::abs(model.gamma(t));
    return std::sqrt(dp * dp + dc * dc * g * g);
}

struct PairSearchResult {
    double blp = 0.0;
    double theta = 0.0;   // polar angle of the best Bloch direction
    double phi = 0.0;
};

/// Grid search of the BLP functional over antipodal pure-state pairs on the Bloch
/// sphere. Cross-check only: the equatorial pair is optimal for dephasing.
inline PairSearchResult blp_pair_search(const DephasingModel& model,
                                        const SignIntervalSet& intervals, int n_theta = 17,
                                        int n_phi = 33) {
    std::vector<std::pair<double, double>> ends;  // |gamma| at (a_m, b_m)
    for (const auto& iv : intervals.intervals) {
        bool truncated = false;
        const double gb = detail::interval_end_value(
            iv, intervals, [&](double t) { return std::abs(model.gamma(t)); },
            [&] { return model.abs_gamma_limit(); }, truncated);
        ends.emplace_back(std::abs(model.gamma(iv.begin)), gb);
    }
    PairSearchResult best;
    best.blp = -1.0;
    for (int i = 0; i < n_theta; ++i) {
        const double theta = std::numbers::pi * i / (n_theta - 1);
        for (int j = 0; j < n_phi; ++j) {
            const double phi = 2.0 * std::numbers::pi * j / n_phi;
            const auto up = DensityMatrix2::pure(std::cos(0.5 * theta),
                                                 std::polar(std::sin(0.5 * theta), phi));
            const auto down = DensityMatrix2::pure(std::sin(0.5 * theta),
                                                   -std::polar(std::cos(0.5 * theta), phi));
            const double dp = up.rho00() - down.rho00();
            const double dc = std::abs(up.rho01() - down.rho01());
            double total = 0.0;
            for (const auto& [ga, gb] : ends)
                total += std::hypot(dp, dc * gb) - std::hypot(dp, dc * ga);
            if (total > best.blp) best = {total, theta, phi};
        }
    }
    best.blp = std::max(best.blp, 0.0);
    return best;
}

} // namespace dephase
