// dephase: command-line sweeps over the dephasing library.
//
//   dephase measures [--grid lambda:0.01:3:100:log] [--grid s:3:5.5:6:lin]
//   dephase qrt --t1 1 --t2 2 --oracle-check
//   dephase photonic --panel b
//   dephase check --lambda 1 --s 3
//   dephase oracle --lambda 2 --s 4 --t1 1
//
// Exit status: 0 ok, 1 usage, 2 numerical failure, 3 check-suite failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dephase/sweep.hpp"

namespace {

using dephase::sweep::Cell;
using dephase::sweep::ResultTable;
using dephase::sweep::SweepSpec;
using nlohmann::ordered_json;

enum Exit { kOk = 0, kUsage = 1, kNumerical = 2, kCheckFailed = 3 };

struct Flags {
    std::string model_file;
    std::optional<double> lambda, s, omega, t1, t2, cutoff_multiple;
    std::string beta;
    std::vector<std::string> grid;
    std::string out;
    std::string format;
    bool oracle_check = false;
    std::optional<unsigned> threads;
    std::optional<std::size_t> modes;
    std::string panel;
};

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--model-file", f.model_file, "config file with a model block and [sweep] table")
        ->check(CLI::ExistingFile);
    sub->add_option("--lambda", f.lambda, "coupling strength");
    sub->add_option("--s", f.s, "spectral exponent");
    sub->add_option("--omega", f.omega, "cutoff frequency");
    sub->add_option("--beta", f.beta, "inverse temperature (inf for zero temperature)");
    sub->add_option("--t1", f.t1, "first time, in units of the model time scale");
    sub->add_option("--t2", f.t2, "second time, in units of the model time scale");
    sub->add_option("--grid", f.grid, "axis:min:max:count:lin|log (repeatable)");
    sub->add_option("--out", f.out, "output path (default stdout)");
    sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", f.threads, "worker threads (default: hardware concurrency)");
    sub->add_option("--modes", f.modes, "oracle bath modes (default 4096)")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 24));
    sub->add_option("--cutoff-multiple", f.cutoff_multiple,
                    "oracle frequency cutoff in units of omega (default 40)");
}

SweepSpec build_spec(const Flags& f) {
    SweepSpec spec;
    if (!f.model_file.empty()) spec = dephase::sweep::spec_from_document(
                                   dephase::config::parse_file(f.model_file));
    if (f.lambda) spec.lambda = *f.lambda;
    if (f.s) spec.s = *f.s;
    if (f.omega) spec.omega = *f.omega;
    if (!f.beta.empty()) spec.beta = dephase::config::to_number(f.beta, "--beta", 0);
    if ((f.lambda || f.s || f.omega || !f.beta.empty()) && spec.mixture)
        throw dephase::config::ConfigError("ohmic flags given with a lorentzian_mixture model file");
    if (f.t1) spec.t1 = *f.t1;
    if (f.t2) spec.t2 = *f.t2;
    for (const auto& g : f.grid) spec.set_axis(dephase::config::GridAxis::parse(g));
    if (f.oracle_check) spec.oracle_check = true;
    if (f.threads) spec.threads = *f.threads;
    if (f.modes) spec.oracle_modes = *f.modes;
    if (f.cutoff_multiple) spec.oracle_cutoff_multiple = *f.cutoff_multiple;
    if (!f.panel.empty()) spec.panel = f.panel;
    return spec;
}

ordered_json cell_json(const Cell& c) {
    if (const double* d = std::get_if<double>(&c)) return *d;   // NaN and inf become null
    return std::get<std::string>(c);
}

ordered_json table_json(const ResultTable& t) {
    ordered_json j;
    ordered_json meta = ordered_json::object();
    for (const auto& [k, v] : t.metadata) meta[k] = v;
    j["metadata"] = meta;
    j["columns"] = t.columns;
    ordered_json rows = ordered_json::array();
    for (const auto& r : t.rows) {
        ordered_json row = ordered_json::array();
        for (const auto& c : r) row.push_back(cell_json(c));
        rows.push_back(row);
    }
    j["rows"] = rows;
    return j;
}

ordered_json check_json(const ResultTable& meta, const std::vector<dephase::CheckResult>& results) {
    ordered_json j;
    for (const auto& [k, v] : meta.metadata) j[k] = v;
    ordered_json checks = ordered_json::array();
    for (const auto& r : results) {
        ordered_json c;
        c["name"] = r.name;
        c["max_residual"] = r.residual;
        c["tolerance"] = r.tolerance;
        c["passed"] = r.passed;
        c["skipped"] = r.skipped;
        if (!r.note.empty()) c["note"] = r.note;
        checks.push_back(c);
    }
    j["check_count"] = results.size();
    j["checks"] = checks;
    j["passed"] = dephase::all_passed(results);
    return j;
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw dephase::config::ConfigError("cannot write '" + path + "'");
    os << text;
}

std::string render(const ResultTable& t, const std::string& format) {
    if (format == "json") return table_json(t).dump(2) + "\n";
    std::ostringstream os;
    dephase::sweep::write_csv(os, t);
    return os.str();
}

int run(const std::string& command, const Flags& f) {
    const SweepSpec spec = build_spec(f);
    if (command == "check") {
        const auto results = dephase::sweep::run_check(spec);
        const auto table = dephase::sweep::check_table(spec, results);
        emit(f.format == "csv" ? render(table, "csv") : check_json(table, results).dump(2) + "\n",
             f.out);
        return dephase::all_passed(results) ? kOk : kCheckFailed;
    }
    ResultTable table;
    if (command == "measures") table = dephase::sweep::run_measures(spec);
    else if (command == "qrt") table = dephase::sweep::run_qrt(spec);
    else if (command == "photonic") table = dephase::sweep::run_photonic(spec);
    else table = dephase::sweep::run_oracle(spec);
    emit(render(table, f.format.empty() ? "csv" : f.format), f.out);
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dephasing dynamics, non-Markovianity measures and QRT-violation sweeps"};
    app.require_subcommand(1);
    Flags f;
    auto* measures = app.add_subcommand("measures", "BLP and RHP measures over (lambda, s)");
    auto* qrt = app.add_subcommand("qrt", "QRT-violation estimator Z over (lambda, s)");
    auto* photonic = app.add_subcommand("photonic", "Z maps for the two-Lorentzian photonic model");
    auto* check = app.add_subcommand("check", "run the invariant suite and report as JSON");
    auto* oracle = app.add_subcommand("oracle", "closed forms against the discrete-bath oracle");
    for (auto* sub : {measures, qrt, photonic, check, oracle}) add_common(sub, f);
    qrt->add_flag("--oracle-check", f.oracle_check, "add a discrete-bath oracle column");
    photonic->add_option("--panel", f.panel, "a, b or times")
        ->check(CLI::IsMember({"a", "b", "times"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run(command, f);
    } catch (const dephase::config::ConfigError& e) {
        std::cerr << "dephase " << command << ": " << e.what() << '\n';
        return kUsage;
    } catch (const dephase::InvalidArgument& e) {
        std::cerr << "dephase " << command << ": " << e.what() << '\n';
        return kUsage;
    } catch (const dephase::UnsupportedParameter& e) {
        std::cerr << "dephase " << command << ": " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "dephase " << command << ": numerical failure: " << e.what() << '\n';
        return kNumerical;
    }
}
