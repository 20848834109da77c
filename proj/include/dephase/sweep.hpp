// sweep.hpp: parameter sweeps behind the command-line tool. Each run_* builds a
// ResultTable whose every number comes from a library call; rows are computed
// in parallel and assembled in grid order, so output does not depend on the
// thread count.

#pragma once

#include <atomic>
#include <cstdio>
#include <exception>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "dephase/check_suite.hpp"
#include "dephase/config.hpp"
#include "dephase/measures.hpp"
#include "dephase/oracle.hpp"
#include "dephase/photonic.hpp"
#include "dephase/qrt.hpp"

namespace dephase::sweep {

inline constexpr const char* kToolVersion = "dephase 1.0.0";

using Cell = std::variant<double, std::string>;

struct ResultTable {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(std::ostream& os, const ResultTable& t) {
    for (const auto& [k, v] : t.metadata) os << "# " << k << ": " << v << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            if (const double* d = std::get_if<double>(&row[i])) os << format_number(*d);
            else os << std::get<std::string>(row[i]);
        }
        os << '\n';
    }
}

/// f(0..n-1) on `threads` workers (0 = hardware concurrency). Results come back
/// in index order; if any call throws, the exception of the lowest index is rethrown.
template <class F>
auto parallel_map(std::size_t n, unsigned threads, F&& f) {
    using R = std::invoke_result_t<F&, std::size_t>;
    std::vector<std::optional<R>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                slots[i].emplace(f(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    unsigned k = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    k = static_cast<unsigned>(std::min<std::size_t>(k, n));
    if (k <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < k; ++i) pool.emplace_back(worker);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<R> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

// ---------------------------------------------------------------------------
// Sweep settings

struct SweepSpec {
    // ohmic parameters; a set value pins the axis of the same name
    std::optional<double> lambda, s, omega, beta, omega_s;
    std::optional<LorentzianMixture> mixture;
    std::vector<config::GridAxis> axes;
    std::optional<double> t1, t2;   // in units of the model's time scale
    bool oracle_check = false;
    std::size_t oracle_modes = 4096;
    double oracle_cutoff_multiple = 40.0;
    std::string panel = "a";
    unsigned threads = 0;

    const config::GridAxis* axis(const std::string& name) const {
        for (const auto& a : axes)
            if (a.name == name) return &a;
        return nullptr;
    }

    /// Adds an axis, replacing any axis with the same name.
    void set_axis(config::GridAxis a) {
        for (auto& x : axes) {
            if (x.name == a.name) {
                x = std::move(a);
                return;
            }
        }
        axes.push_back(std::move(a));
    }
};

inline SweepSpec spec_from_document(const config::Document& doc) {
    using config::ConfigError;
    SweepSpec spec;
    if (const auto* top = doc.table(""))
        config::reject_unknown(*top, "<top level>", {});
    for (const auto& [name, t] : doc.tables) {
        if (name != "" && name != "ohmic" && name != "lorentzian_mixture" && name != "sweep")
            throw ConfigError("unknown table [" + name + "]",
                              t.empty() ? 0 : t.begin()->second.line);
    }
    for (const auto& [name, list] : doc.array_tables) {
        if (name != "lorentzian_mixture.components")
            throw ConfigError("unknown table [[" + name + "]]");
    }
    if (auto m = config::read_model(doc)) {
        if (const auto* o = std::get_if<config::OhmicSpec>(&*m)) {
            spec.lambda = o->sd.lambda();
            spec.s = o->sd.s();
            spec.omega = o->sd.cutoff();
            spec.beta = o->beta.is_zero_temperature() ? std::numeric_limits<double>::infinity()
                                                      : o->beta.beta();
            spec.omega_s = o->omega_s;
        } else {
            spec.mixture = std::get<LorentzianMixture>(*m);
        }
    }
    if (const auto* sw = doc.table("sweep")) {
        config::reject_unknown(*sw, "sweep",
                               {"grid", "t1", "t2", "threads", "oracle_check", "modes",
                                "cutoff_multiple", "panel"});
        if (auto it = sw->find("grid"); it != sw->end()) {
            for (const auto& g : it->second.items) {
                try {
                    auto a = config::GridAxis::parse(g);
                    if (spec.axis(a.name))
                        throw ConfigError("duplicate grid axis '" + a.name + "'", it->second.line);
                    spec.axes.push_back(std::move(a));
                } catch (const ConfigError& e) {
                    if (e.line() > 0) throw;
                    throw ConfigError(std::string("field 'sweep.grid': ") + e.what(),
                                      it->second.line);
                }
            }
        }
        spec.t1 = config::get_number(*sw, "t1", "sweep");
        spec.t2 = config::get_number(*sw, "t2", "sweep");
        if (auto v = config::get_number(*sw, "threads", "sweep")) {
            if (!(*v >= 0) || *v != std::floor(*v))
                throw ConfigError("field 'sweep.threads': expected a non-negative integer",
                                  sw->at("threads").line);
            spec.threads = static_cast<unsigned>(*v);
        }
        if (auto v = config::get_number(*sw, "modes", "sweep")) {
            if (!(*v >= 2) || *v != std::floor(*v))
                throw ConfigError("field 'sweep.modes': expected an integer >= 2",
                                  sw->at("modes").line);
            spec.oracle_modes = static_cast<std::size_t>(*v);
        }
        if (auto v = config::get_number(*sw, "cutoff_multiple", "sweep"))
            spec.oracle_cutoff_multiple = *v;
        if (auto it = sw->find("oracle_check"); it != sw->end()) {
            const auto& text = it->second.items.front();
            if (text != "true" && text != "false")
                throw ConfigError("field 'sweep.oracle_check': expected true or false",
                                  it->second.line);
            spec.oracle_check = text == "true";
        }
        if (auto it = sw->find("panel"); it != sw->end()) spec.panel = it->second.items.front();
    }
    return spec;
}

namespace detail {

inline void require_axes(const SweepSpec& spec, const char* command,
                         std::initializer_list<const char*> allowed) {
    for (const auto& a : spec.axes) {
        bool ok = false;
        for (const char* n : allowed) ok = ok || a.name == n;
        if (!ok) {
            std::string list;
            for (const char* n : allowed) list += std::string(list.empty() ? "" : ", ") + n;
            throw config::ConfigError(std::string(command) + ": unknown grid axis '" + a.name +
                                      "' (expected " + list + ")");
        }
    }
}

/// Explicit grid, else the pinned value, else the default grid.
inline config::GridAxis pick_axis(const SweepSpec& spec, const std::string& name,
                                  std::optional<double> pin, config::GridAxis fallback) {
    if (const auto* a = spec.axis(name)) return *a;
    if (pin) return config::GridAxis::point(name, *pin);
    return fallback;
}

inline InverseTemperature temperature(const SweepSpec& spec) {
    if (!spec.beta || (std::isinf(*spec.beta) && *spec.beta > 0))
        return InverseTemperature::zero_temperature();
    return InverseTemperature::finite(*spec.beta);
}

inline void require_ohmic(const SweepSpec& spec, const char* command) {
    if (spec.mixture)
        throw config::ConfigError(std::string(command) + ": needs an ohmic model");
}

inline ResultTable start_table(const char* command, const std::vector<config::GridAxis>& axes) {
    ResultTable t;
    t.metadata.emplace_back("tool", kToolVersion);
    t.metadata.emplace_back("command", command);
    std::string grid;
    for (const auto& a : axes) grid += (grid.empty() ? "" : " ") + a.to_string();
    t.metadata.emplace_back("grid", grid);
    return t;
}

inline std::string ohmic_description(const SweepSpec& spec, const InverseTemperature& beta) {
    return "ohmic omega=" + format_number(spec.omega.value_or(1.0)) + " beta=" +
           (beta.is_zero_temperature() ? std::string("inf") : format_number(beta.beta()));
}

inline std::string join_flags(const std::vector<std::string>& flags) {
    std::string out;
    for (const auto& f : flags)
        if (!f.empty()) out += (out.empty() ? "" : ";") + f;
    return out;
}

inline DephasingModel ohmic_model(const OhmicFamilySpectralDensity& sd,
                                  const InverseTemperature& beta, double omega_s) {
    return beta.is_zero_temperature() ? DephasingModel::spin_boson(sd, omega_s)
                                      : DephasingModel::spin_boson_quadrature(sd, beta, omega_s);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Commands

/// Both non-Markovianity measures over a (lambda, s) grid; s outer, lambda inner.
inline ResultTable run_measures(const SweepSpec& spec) {
    detail::require_ohmic(spec, "measures");
    detail::require_axes(spec, "measures", {"lambda", "s"});
    const auto la = detail::pick_axis(spec, "lambda", spec.lambda, {"lambda", 0.01, 3.0, 100, true});
    const auto sa = detail::pick_axis(spec, "s", spec.s, {"s", 3.0, 5.5, 6, false});
    const double omega = spec.omega.value_or(1.0);
    const auto beta = detail::temperature(spec);
    auto table = detail::start_table("measures", {la, sa});
    table.metadata.emplace_back("model", detail::ohmic_description(spec, beta));
    table.columns = {"lambda", "s", "blp", "rhp", "flag"};
    const auto lv = la.values();
    const auto sv = sa.values();
    table.rows = parallel_map(lv.size() * sv.size(), spec.threads, [&](std::size_t i) {
        const double s = sv[i / lv.size()];
        const double lambda = lv[i % lv.size()];
        const OhmicFamilySpectralDensity sd{lambda, s, omega};
        const auto m = compute_measures(detail::ohmic_model(sd, beta, spec.omega_s.value_or(0.0)));
        return std::vector<Cell>{lambda, s, m.blp.value, m.rhp.value,
                                 detail::join_flags({m.blp.lower_bound ? "blp_lower_bound" : "",
                                                     m.rhp.lower_bound ? "rhp_lower_bound" : ""})};
    });
    return table;
}

/// QRT-violation estimator Z over a (lambda, s) grid at fixed (t1, t2).
inline ResultTable run_qrt(const SweepSpec& spec) {
    detail::require_ohmic(spec, "qrt");
    detail::require_axes(spec, "qrt", {"lambda", "s"});
    const auto la = detail::pick_axis(spec, "lambda", spec.lambda, {"lambda", 0.0, 5.0, 51, false});
    const auto sa = detail::pick_axis(spec, "s", spec.s, {"s", 2.0, 4.0, 3, false});
    const double omega = spec.omega.value_or(1.0);
    const auto beta = detail::temperature(spec);
    if (!beta.is_zero_temperature())
        throw config::ConfigError("qrt: two-time correlators are only available at zero temperature");
    const double t1 = spec.t1.value_or(1.0);
    const double t2 = spec.t2.value_or(2.0);
    if (!(t1 >= 0.0 && t2 >= t1))
        throw config::ConfigError("qrt: need 0 <= t1 <= t2");
    const auto lv = la.values();
    const auto sv = sa.values();
    for (double s : sv)
        if (!(s > 1.0)) throw config::ConfigError("qrt: every s on the grid must exceed 1");

    auto table = detail::start_table("qrt", {la, sa});
    table.metadata.emplace_back("model", detail::ohmic_description(spec, beta));
    table.metadata.emplace_back("times", "t1=" + format_number(t1) + " t2=" + format_number(t2) +
                                             " (units of 1/omega)");
    table.columns = {"lambda", "s", "z"};
    std::optional<GaussLegendreRule> rule;
    if (spec.oracle_check) {
        rule = gauss_legendre(spec.oracle_modes);
        table.metadata.emplace_back("oracle", "modes=" + std::to_string(spec.oracle_modes) +
                                                  " omega_max=" +
                                                  format_number(spec.oracle_cutoff_multiple) +
                                                  "*omega");
        table.columns.push_back("z_oracle");
    }
    table.columns.push_back("flag");
    table.rows = parallel_map(lv.size() * sv.size(), spec.threads, [&](std::size_t i) {
        const double s = sv[i / lv.size()];
        const double lambda = lv[i % lv.size()];
        const OhmicFamilySpectralDensity sd{lambda, s, omega};
        std::vector<Cell> row{lambda, s,
                              z_estimator(DephasingModel::spin_boson(sd), t1 / omega, t2 / omega)};
        std::string flag;
        if (rule) {
            const auto bath =
                discretize_bath(sd, beta, *rule, spec.oracle_cutoff_multiple * omega);
            row.emplace_back(oracle_z(bath, t1 / omega, t2 / omega));
            if (bath.truncation_warning) flag = "oracle_truncated";
        }
        row.emplace_back(flag);
        return row;
    });
    return table;
}

/// Z maps for the photonic model. Panel "a": equal centers, widths split by
/// delta_delta_omega (units of the center frequency). Panel "b": equal widths,
/// centers split by delta_omega0 (units of the width), with the BLP measure of
/// each column. Panel "times": Z over (t1, tau) for the configured mixture.
inline ResultTable run_photonic(const SweepSpec& spec) {
    using config::ConfigError;
    if (spec.lambda || spec.s || spec.beta)
        throw ConfigError("photonic: ohmic parameters do not apply");
    const std::string& panel = spec.panel;
    const double t1_units = spec.t1.value_or(1.0);

    if (panel == "times") {
        detail::require_axes(spec, "photonic", {"t1", "tau"});
        const auto mix = spec.mixture.value_or(LorentzianMixture::single(1.0, 1.0, 1.0));
        const PhotonicModel model{mix};
        const double unit = 1.0 / DephasingModel::photonic(model).time_scale();
        const auto ta = detail::pick_axis(spec, "t1", spec.t1, {"t1", 0.0, 5.0, 50, false});
        const auto ua = detail::pick_axis(spec, "tau", std::nullopt, {"tau", 0.0, 5.0, 50, false});
        auto table = detail::start_table("photonic", {ta, ua});
        table.metadata.emplace_back("panel", "times (units of 1/(|delta_n| max width))");
        table.metadata.emplace_back("components", std::to_string(mix.components().size()));
        table.columns = {"t1", "tau", "z", "flag"};
        const auto tv = ta.values();
        const auto uv = ua.values();
        table.rows = parallel_map(tv.size() * uv.size(), spec.threads, [&](std::size_t i) {
            const double a = tv[i / uv.size()];
            const double b = uv[i % uv.size()];
            const double t1 = a / unit;
            const double tau = b / unit;
            if (near_gamma_zero(model, t1) || near_gamma_zero(model, tau))
                return std::vector<Cell>{a, b, std::nan(""), std::string("singular")};
            return std::vector<Cell>{a, b, photonic_z(model, t1, t1 + tau), std::string()};
        });
        return table;
    }
    if (panel != "a" && panel != "b")
        throw ConfigError("photonic: panel must be a, b or times");

    const bool pa = panel == "a";
    const char* xname = pa ? "delta_delta_omega" : "delta_omega0";
    detail::require_axes(spec, "photonic", {xname, "tau"});
    double ratio = pa ? 1.0 : 2.0, dn = 1.0, center = 1.0, width = pa ? 0.5 : 1.0;
    if (spec.mixture) {
        const auto& cs = spec.mixture->components();
        if (cs.size() != 2)
            throw ConfigError("photonic: panels a and b need a two-component mixture");
        ratio = spec.mixture->ratio();
        dn = spec.mixture->delta_n();
        center = cs[1].center;
        width = cs[1].width;
    }
    const double unit = pa ? center : width;
    if (!(unit > 0.0))
        throw ConfigError(pa ? "photonic: panel a needs a positive center frequency"
                             : "photonic: panel b needs a positive width");
    auto make = [&](double x) {
        return pa ? split_width_model(x * unit, center, width, ratio, dn)
                  : split_center_model(x * unit, width, ratio, dn);
    };
    const auto xa = detail::pick_axis(spec, xname, std::nullopt,
                                      {xname, 0.0, pa ? 5.0 : 10.0, 51, false});
    const auto ua = detail::pick_axis(spec, "tau", std::nullopt, {"tau", 0.0, 10.0, 51, false});
    auto table = detail::start_table("photonic", {xa, ua});
    table.metadata.emplace_back("panel", panel);
    table.metadata.emplace_back(
        "model", "lorentzian pair ratio=" + format_number(ratio) + " delta_n=" + format_number(dn) +
                     (pa ? " center=" + format_number(center) + " base_width=" + format_number(width)
                         : " width=" + format_number(width)));
    table.metadata.emplace_back("times", "t1=" + format_number(t1_units) + " (units of 1/" +
                                             (pa ? "center" : "width") + ")");
    table.columns = {xname, "tau", "z"};
    const auto xv = xa.values();
    const auto uv = ua.values();

    std::vector<MeasureValue> blp;
    if (!pa) {
        table.columns.push_back("blp");
        blp = parallel_map(xv.size(), spec.threads, [&](std::size_t i) {
            return compute_measures(DephasingModel::photonic(make(xv[i]))).blp;
        });
    }
    table.columns.push_back("flag");
    const double t1 = t1_units / unit;
    table.rows = parallel_map(xv.size() * uv.size(), spec.threads, [&](std::size_t i) {
        const std::size_t ix = i / uv.size();
        const double x = xv[ix];
        const double u = uv[i % uv.size()];
        const auto model = make(x);
        const double tau = u / unit;
        std::vector<std::string> flags;
        double z = std::nan("");
        if (near_gamma_zero(model, t1) || near_gamma_zero(model, tau)) {
            flags.push_back("singular");
        } else {
            z = photonic_z(model, t1, t1 + tau);
        }
        std::vector<Cell> row{x, u, z};
        if (!pa) {
            row.emplace_back(blp[ix].value);
            if (blp[ix].lower_bound) flags.push_back("blp_lower_bound");
        }
        row.emplace_back(detail::join_flags(flags));
        return row;
    });
    return table;
}

/// Closed forms (or quadrature at finite temperature) against the discrete-bath
/// oracle as a function of t2 at fixed t1.
inline ResultTable run_oracle(const SweepSpec& spec) {
    detail::require_ohmic(spec, "oracle");
    detail::require_axes(spec, "oracle", {"t2"});
    const double omega = spec.omega.value_or(1.0);
    const OhmicFamilySpectralDensity sd{spec.lambda.value_or(1.0), spec.s.value_or(3.0), omega};
    const auto beta = detail::temperature(spec);
    const double t1 = spec.t1.value_or(1.0);
    const auto ta = detail::pick_axis(spec, "t2", spec.t2, {"t2", t1, t1 + 9.0, 91, false});
    const auto tv = ta.values();
    for (double t2 : tv)
        if (!(t2 >= t1 && t1 >= 0.0)) throw config::ConfigError("oracle: need 0 <= t1 <= t2");

    const auto bath = discretize_bath(sd, beta, spec.oracle_modes, spec.oracle_cutoff_multiple * omega);
    auto table = detail::start_table("oracle", {ta});
    table.metadata.emplace_back("model", "ohmic lambda=" + format_number(sd.lambda()) +
                                             " s=" + format_number(sd.s()) + " " +
                                             detail::ohmic_description(spec, beta).substr(6));
    table.metadata.emplace_back("times", "t1=" + format_number(t1) + " (units of 1/omega)");
    table.metadata.emplace_back("oracle",
                                "modes=" + std::to_string(spec.oracle_modes) + " omega_max=" +
                                    format_number(spec.oracle_cutoff_multiple) + "*omega" +
                                    (bath.truncation_warning ? " truncated" : ""));
    table.columns = {"t2",        "gamma_reference", "gamma_oracle", "phi_reference",
                     "phi_oracle", "z_reference",    "z_oracle",     "flag"};
    const bool closed = beta.is_zero_temperature() && sd.s() > 1.0;
    const auto model = DephasingModel::spin_boson(sd);
    table.rows = parallel_map(tv.size(), spec.threads, [&](std::size_t i) {
        const double a = t1 / omega;
        const double b = tv[i] / omega;
        const double nan = std::nan("");
        double g_ref = nan, phi_ref = nan, z_ref = nan;
        std::string flag;
        if (closed) {
            g_ref = decoherence_closed(sd, b);
            phi_ref = phase_phi(sd, a, b);
            z_ref = z_estimator(model, a, b);
        } else if (!beta.is_zero_temperature()) {
            g_ref = decoherence_quadrature(sd, beta, b);
            if (sd.s() > 1.0) phi_ref = phase_phi(sd, a, b);   // independent of temperature
            flag = "z_reference_unavailable";
        } else {
            if (sd.s() == 1.0) g_ref = decoherence_closed(sd, b);
            flag = "reference_unavailable";
        }
        const auto f = oracle_two_time(bath, a, b);
        return std::vector<Cell>{tv[i], g_ref,   oracle_gamma(bath, b), phi_ref,
                                 f.phi21, z_ref, oracle_z(bath, a, b), flag};
    });
    return table;
}

/// The invariant suite for the configured ohmic model.
inline std::vector<CheckResult> run_check(const SweepSpec& spec) {
    detail::require_ohmic(spec, "check");
    if (!spec.axes.empty()) throw config::ConfigError("check: takes no grid");
    const OhmicFamilySpectralDensity sd{spec.lambda.value_or(1.0), spec.s.value_or(3.0),
                                        spec.omega.value_or(1.0)};
    CheckSuiteOptions opt;
    opt.oracle_modes = spec.oracle_modes;
    opt.oracle_cutoff_multiple = spec.oracle_cutoff_multiple;
    const auto beta = detail::temperature(spec);
    if (!beta.is_zero_temperature()) opt.finite_beta = beta.beta();
    return run_check_suite(sd, DephasingModel::spin_boson(sd, spec.omega_s.value_or(0.0)), opt);
}

inline ResultTable check_table(const SweepSpec& spec, const std::vector<CheckResult>& results) {
    ResultTable t;
    t.metadata.emplace_back("tool", kToolVersion);
    t.metadata.emplace_back("command", "check");
    t.metadata.emplace_back("model", "ohmic lambda=" + format_number(spec.lambda.value_or(1.0)) +
                                         " s=" + format_number(spec.s.value_or(3.0)) + " " +
                                         detail::ohmic_description(spec, detail::temperature(spec))
                                             .substr(6));
    t.columns = {"name", "residual", "tolerance", "status", "note"};
    for (const auto& r : results) {
        std::string note = r.note;
        for (char& c : note)
            if (c == ',' || c == '\n') c = ' ';
        t.rows.push_back({r.name, r.residual, r.tolerance,
                          std::string(r.skipped ? "skipped" : r.passed ? "pass" : "fail"), note});
    }
    return t;
}

} // namespace dephase::sweep
