// config.hpp: model/sweep configuration files and grid axes.
//
// Config files use a small TOML subset:
//
//   # comment
//   [ohmic]
//   lambda = 1.0
//   s = 3
//   omega = 1.0
//   beta = "inf"            # optional, zero temperature by default
//
//   [lorentzian_mixture]
//   delta_n = 1.0
//   [[lorentzian_mixture.components]]
//   A = 0.5
//   omega0 = 1.0
//   delta_omega = 0.5
//
//   [sweep]
//   grid = ["lambda:0.01:3:100:log", "s:3:5.5:6:lin"]
//   t1 = 1.0
//
// Values are numbers, quoted strings, true/false, or flat arrays of those.

#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dephase/dephasing.hpp"
#include "dephase/spectral.hpp"

namespace dephase::config {

/// Malformed configuration; carries the offending line (0 when not tied to a line).
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

struct Value {
    std::vector<std::string> items;   // one item for scalars
    bool is_array = false;
    int line = 0;
};

using Table = std::map<std::string, Value>;

struct Document {
    std::map<std::string, Table> tables;
    std::map<std::string, std::vector<Table>> array_tables;

    const Table* table(const std::string& name) const {
        auto it = tables.find(name);
        return it == tables.end() ? nullptr : &it->second;
    }
};

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

inline std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

inline std::string parse_scalar(const std::string& raw, int line) {
    const std::string s = trim(raw);
    if (s.empty()) throw ConfigError("missing value", line);
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"') throw ConfigError("unterminated string", line);
        return s.substr(1, s.size() - 2);
    }
    return s;
}

inline Value parse_value(const std::string& raw, int line) {
    const std::string s = trim(raw);
    Value v;
    v.line = line;
    if (!s.empty() && s.front() == '[') {
        if (s.back() != ']') throw ConfigError("unterminated array", line);
        v.is_array = true;
        std::string body = s.substr(1, s.size() - 2);
        std::string cur;
        bool quoted = false;
        for (char c : body) {
            if (c == '"') quoted = !quoted;
            if (c == ',' && !quoted) {
                if (!trim(cur).empty()) v.items.push_back(parse_scalar(cur, line));
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!trim(cur).empty()) v.items.push_back(parse_scalar(cur, line));
        return v;
    }
    v.items.push_back(parse_scalar(s, line));
    return v;
}

} // namespace detail

inline Document parse(std::istream& in) {
    Document doc;
    Table* current = &doc.tables[""];
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = detail::trim(detail::strip_comment(line));
        if (s.empty()) continue;
        if (s.rfind("[[", 0) == 0) {
            if (s.size() < 4 || s.substr(s.size() - 2) != "]]")
                throw ConfigError("malformed array-of-tables header", lineno);
            const std::string name = detail::trim(s.substr(2, s.size() - 4));
            if (name.empty()) throw ConfigError("empty table name", lineno);
            auto& list = doc.array_tables[name];
            list.emplace_back();
            current = &list.back();
            continue;
        }
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError("malformed table header", lineno);
            const std::string name = detail::trim(s.substr(1, s.size() - 2));
            if (name.empty()) throw ConfigError("empty table name", lineno);
            if (doc.tables.count(name) && !doc.tables[name].empty())
                throw ConfigError("duplicate table [" + name + "]", lineno);
            current = &doc.tables[name];
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value", lineno);
        const std::string key = detail::trim(s.substr(0, eq));
        if (key.empty()) throw ConfigError("empty key", lineno);
        if (current->count(key)) throw ConfigError("duplicate key '" + key + "'", lineno);
        (*current)[key] = detail::parse_value(s.substr(eq + 1), lineno);
    }
    return doc;
}

inline Document parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
}

inline Document parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse(in);
}

inline double to_number(const std::string& text, const std::string& field, int line) {
    if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (!text.empty() && *first == '+') ++first;
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || p != last)
        throw ConfigError("field '" + field + "': expected a number, got '" + text + "'", line);
    return v;
}

inline std::optional<double> get_number(const Table& t, const std::string& key,
                                        const std::string& table_name) {
    auto it = t.find(key);
    if (it == t.end()) return std::nullopt;
    if (it->second.is_array)
        throw ConfigError("field '" + table_name + "." + key + "': expected a scalar",
                          it->second.line);
    return to_number(it->second.items.front(), table_name + "." + key, it->second.line);
}

inline double require_number(const Table& t, const std::string& key,
                             const std::string& table_name) {
    if (auto v = get_number(t, key, table_name)) return *v;
    throw ConfigError("missing field '" + table_name + "." + key + "'");
}

inline void reject_unknown(const Table& t, const std::string& table_name,
                           std::initializer_list<const char*> known) {
    for (const auto& [k, v] : t) {
        bool ok = false;
        for (const char* n : known) ok = ok || k == n;
        if (!ok) throw ConfigError("unknown field '" + table_name + "." + k + "'", v.line);
    }
}

// ---------------------------------------------------------------------------
// Model blocks

struct OhmicSpec {
    OhmicFamilySpectralDensity sd{1.0, 3.0, 1.0};
    InverseTemperature beta = InverseTemperature::zero_temperature();
    double omega_s = 0.0;
};

using ModelSpec = std::variant<OhmicSpec, LorentzianMixture>;

inline InverseTemperature beta_from_number(double b) {
    if (std::isinf(b) && b > 0) return InverseTemperature::zero_temperature();
    return InverseTemperature::finite(b);
}

/// Reads the [ohmic] or [lorentzian_mixture] block. Exactly one must be present.
inline std::optional<ModelSpec> read_model(const Document& doc) {
    const Table* ohmic = doc.table("ohmic");
    const Table* mix = doc.table("lorentzian_mixture");
    const bool has_components = doc.array_tables.count("lorentzian_mixture.components") > 0;
    if (ohmic && (mix || has_components))
        throw ConfigError("config names both an ohmic and a lorentzian_mixture model");
    // validation failures point at the first line of the model block
    auto first_line = [](const Table* t) {
        int line = 0;
        if (t)
            for (const auto& [k, v] : *t)
                if (line == 0 || v.line < line) line = v.line;
        return line;
    };
    try {
        if (ohmic) {
            reject_unknown(*ohmic, "ohmic", {"lambda", "s", "omega", "beta", "omega_s"});
            OhmicSpec spec{{require_number(*ohmic, "lambda", "ohmic"),
                            require_number(*ohmic, "s", "ohmic"),
                            get_number(*ohmic, "omega", "ohmic").value_or(1.0)}};
            if (auto b = get_number(*ohmic, "beta", "ohmic")) spec.beta = beta_from_number(*b);
            spec.omega_s = get_number(*ohmic, "omega_s", "ohmic").value_or(0.0);
            return spec;
        }
        if (mix || has_components) {
            const Table empty;
            const Table& m = mix ? *mix : empty;
            reject_unknown(m, "lorentzian_mixture", {"delta_n"});
            std::vector<LorentzianComponent> comps;
            if (has_components) {
                for (const auto& c : doc.array_tables.at("lorentzian_mixture.components")) {
                    const std::string name = "lorentzian_mixture.components";
                    reject_unknown(c, name, {"A", "omega0", "delta_omega"});
                    comps.push_back({require_number(c, "A", name), require_number(c, "omega0", name),
                                     require_number(c, "delta_omega", name)});
                }
            }
            return LorentzianMixture{std::move(comps),
                                     require_number(m, "delta_n", "lorentzian_mixture")};
        }
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("invalid model: ") + e.what(),
                          first_line(ohmic ? ohmic : mix));
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Grid axes

/// "name:min:max:count:lin|log", or a single fixed value.
struct GridAxis {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 1;
    bool log = false;

    static GridAxis point(std::string name, double v) { return {std::move(name), v, v, 1, false}; }

    static GridAxis parse(const std::string& text) {
        std::vector<std::string> parts;
        std::string cur;
        for (char c : text) {
            if (c == ':') {
                parts.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        parts.push_back(cur);
        if (parts.size() != 5)
            throw ConfigError("grid '" + text + "': expected axis:min:max:count:lin|log");
        GridAxis a;
        a.name = detail::trim(parts[0]);
        a.min = to_number(detail::trim(parts[1]), "grid " + a.name + " min", 0);
        a.max = to_number(detail::trim(parts[2]), "grid " + a.name + " max", 0);
        const double n = to_number(detail::trim(parts[3]), "grid " + a.name + " count", 0);
        const std::string kind = detail::trim(parts[4]);
        if (a.name.empty()) throw ConfigError("grid '" + text + "': empty axis name");
        if (!(n >= 2) || n != std::floor(n) || n > 1e7)
            throw ConfigError("grid '" + text + "': count must be an integer >= 2");
        a.count = static_cast<std::size_t>(n);
        if (kind != "lin" && kind != "log")
            throw ConfigError("grid '" + text + "': spacing must be lin or log");
        a.log = kind == "log";
        if (!(a.max > a.min) || !std::isfinite(a.min) || !std::isfinite(a.max))
            throw ConfigError("grid '" + text + "': need finite min < max");
        if (a.log && !(a.min > 0.0))
            throw ConfigError("grid '" + text + "': log spacing needs min > 0");
        return a;
    }

    std::vector<double> values() const {
        std::vector<double> v(count);
        if (count == 1) {
            v[0] = min;
            return v;
        }
        for (std::size_t i = 0; i < count; ++i) {
            const double f = static_cast<double>(i) / static_cast<double>(count - 1);
            v[i] = log ? std::exp(std::log(min) + f * (std::log(max) - std::log(min)))
                       : min + f * (max - min);
        }
        v.front() = min;
        v.back() = max;
        return v;
    }

    std::string to_string() const {
        char buf[128];
        if (count == 1) {
            std::snprintf(buf, sizeof buf, "%s=%.17g", name.c_str(), min);
        } else {
            std::snprintf(buf, sizeof buf, "%s:%.17g:%.17g:%zu:%s", name.c_str(), min, max, count,
                          log ? "log" : "lin");
        }
        return buf;
    }
};

} // namespace dephase::config
