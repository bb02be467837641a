#pragma once

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdh/analysis.hpp"
#include "cdh/datum.hpp"

namespace cdh::cli {

/// Invalid configuration text or value; `where` names the line or flag.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& where, const std::string& what)
        : std::runtime_error(where + ": " + what) {}
};

/// Shortest decimal text that reads back to the same double.
inline std::string format_number(double v) {
    char buf[32];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

inline double parse_number(const std::string& text, const std::string& where) {
    const char* begin = text.data();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (text.empty() || end != begin + text.size() || errno == ERANGE || !std::isfinite(v))
        throw ConfigError(where, "not a finite number: '" + text + "'");
    return v;
}

inline long long parse_integer(const std::string& text, const std::string& where) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
        throw ConfigError(where, "not an integer: '" + text + "'");
    return v;
}

inline std::vector<double> parse_number_list(const std::string& text, const std::string& where) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(item, where));
    return out;
}

inline std::string join_numbers(const std::vector<double>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) s += ',';
        s += format_number(v[k]);
    }
    return s;
}

/// Times: an explicit list "0.5,1,2,4" or a geometric range "geom:t0:t1:n".
struct TimeSpec {
    std::vector<double> list;
    bool geometric = false;
    double t0 = 0.0, t1 = 0.0;
    std::size_t count = 0;

    [[nodiscard]] std::vector<double> values() const { return geometric ? geometric_times(t0, t1, count) : list; }

    [[nodiscard]] std::string to_text() const {
        if (geometric) return "geom:" + format_number(t0) + ":" + format_number(t1) + ":" + std::to_string(count);
        return join_numbers(list);
    }

    static TimeSpec parse(const std::string& text, const std::string& where) {
        TimeSpec s;
        if (text.rfind("geom:", 0) == 0) {
            std::vector<std::string> parts;
            std::stringstream ss(text.substr(5));
            std::string item;
            while (std::getline(ss, item, ':')) parts.push_back(item);
            if (parts.size() != 3) throw ConfigError(where, "geometric times must read geom:t0:t1:n");
            s.geometric = true;
            s.t0 = parse_number(parts[0], where);
            s.t1 = parse_number(parts[1], where);
            const long long n = parse_integer(parts[2], where);
            if (!(s.t0 > 0.0 && s.t1 > s.t0) || n < 2) throw ConfigError(where, "need 0 < t0 < t1 and n >= 2");
            s.count = static_cast<std::size_t>(n);
            return s;
        }
        if (text.empty()) throw ConfigError(where, "times list is empty");
        s.list = parse_number_list(text, where);
        for (std::size_t k = 0; k < s.list.size(); ++k) {
            if (!(s.list[k] > 0.0)) throw ConfigError(where, "times must be > 0");
            if (k > 0 && !(s.list[k] > s.list[k - 1])) throw ConfigError(where, "times must be strictly increasing");
        }
        return s;
    }
};

/// Parameters each datum family accepts (besides datum.family).
inline const std::map<std::string, std::set<std::string>>& family_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"annulus_indicator", {"r1", "r2", "height"}},
        {"gaussian_bump_in_y", {"center", "width", "height"}},
        {"step_to_K", {"K", "transition_radius", "sharpness"}},
        {"smooth_erfc_like", {"K", "shift"}},
        {"tabulated", {"radii", "values", "tail_left", "tail_right"}},
        {"constant", {"value"}},
    };
    return keys;
}

/// One experiment run. Every field has a text form under a flat dotted key;
/// unknown keys are rejected.
struct ExperimentConfig {
    std::string experiment;
    int dim = 3;
    std::string family;                        // datum.family
    std::map<std::string, std::string> datum;  // datum.<param> -> text (canonical)
    TimeSpec times;
    std::size_t grid_points = 4096;
    double grid_c = 8.0;
    std::string output_dir;  // empty: CDH_OUTPUT_DIR or ./cdh_out
    std::uint64_t seed = 1;
    bool plot = true;

    /// Sets one key from text; `where` is used in diagnostics.
    void set(const std::string& key, const std::string& value, const std::string& where) {
        if (key == "experiment") {
            experiment = value;
        } else if (key == "dim") {
            const long long n = parse_integer(value, where);
            if (n < 1 || n > 64) throw ConfigError(where, "dim must lie in [1, 64]");
            dim = static_cast<int>(n);
        } else if (key == "datum.family") {
            if (!family_keys().count(value)) throw ConfigError(where, "unknown datum family '" + value + "'");
            if (value != family) datum.clear();
            family = value;
        } else if (key.rfind("datum.", 0) == 0) {
            const std::string param = key.substr(6);
            if (family.empty()) throw ConfigError(where, "datum.family must be set before " + key);
            if (!family_keys().at(family).count(param))
                throw ConfigError(where, "unknown key '" + key + "' for family " + family);
            if (param == "radii" || param == "values") datum[param] = join_numbers(parse_number_list(value, where));
            else datum[param] = format_number(parse_number(value, where));
        } else if (key == "times") {
            times = TimeSpec::parse(value, where);
        } else if (key == "grid.points") {
            const long long n = parse_integer(value, where);
            if (n < 16) throw ConfigError(where, "grid.points must be >= 16");
            grid_points = static_cast<std::size_t>(n);
        } else if (key == "grid.c") {
            grid_c = parse_number(value, where);
            if (!(grid_c > 0.0)) throw ConfigError(where, "grid.c must be > 0");
        } else if (key == "output_dir") {
            output_dir = value;
        } else if (key == "seed") {
            const long long s = parse_integer(value, where);
            if (s < 0) throw ConfigError(where, "seed must be >= 0");
            seed = static_cast<std::uint64_t>(s);
        } else if (key == "plot") {
            if (value != "true" && value != "false") throw ConfigError(where, "plot must be true or false");
            plot = value == "true";
        } else {
            throw ConfigError(where, "unknown key '" + key + "'");
        }
    }

    /// Canonical text: one key per line, fixed order, numbers round-tripping.
    [[nodiscard]] std::string serialize() const {
        std::ostringstream os;
        os << "experiment=" << experiment << '\n';
        os << "dim=" << dim << '\n';
        if (!family.empty()) {
            os << "datum.family=" << family << '\n';
            for (const auto& [k, v] : datum) os << "datum." << k << '=' << v << '\n';
        }
        if (times.geometric || !times.list.empty()) os << "times=" << times.to_text() << '\n';
        os << "grid.points=" << grid_points << '\n';
        os << "grid.c=" << format_number(grid_c) << '\n';
        if (!output_dir.empty()) os << "output_dir=" << output_dir << '\n';
        os << "seed=" << seed << '\n';
        os << "plot=" << (plot ? "true" : "false") << '\n';
        return os.str();
    }

    [[nodiscard]] LineGridPolicy grid_policy() const {
        LineGridPolicy p;
        p.points = grid_points;
        p.c = grid_c;
        return p;
    }

    [[nodiscard]] double datum_number(const std::string& key, double fallback) const {
        const auto it = datum.find(key);
        return it == datum.end() ? fallback : parse_number(it->second, "datum." + key);
    }

    /// The configured InitialDatum; family parameters default to the family's
    /// defaults.
    [[nodiscard]] InitialDatum build_datum() const {
        if (family.empty()) throw ConfigError("datum.family", "no datum configured");
        const Dimension d(dim);
        try {
            if (family == "annulus_indicator") {
                AnnulusIndicator a;
                return {AnnulusIndicator{datum_number("r1", a.r1), datum_number("r2", a.r2),
                                         datum_number("height", a.height)},
                        d};
            }
            if (family == "gaussian_bump_in_y") {
                GaussianBumpInY g;
                return {GaussianBumpInY{datum_number("center", g.center), datum_number("width", g.width),
                                        datum_number("height", g.height)},
                        d};
            }
            if (family == "step_to_K") {
                StepToK s;
                return {StepToK{datum_number("K", s.K), datum_number("transition_radius", s.transition_radius),
                                datum_number("sharpness", s.sharpness)},
                        d};
            }
            if (family == "smooth_erfc_like") {
                SmoothErfcLike e;
                return {SmoothErfcLike{datum_number("K", e.K), datum_number("shift", e.shift)}, d};
            }
            if (family == "tabulated") {
                Tabulated t;
                if (!datum.count("radii") || !datum.count("values"))
                    throw ConfigError("datum", "tabulated needs datum.radii and datum.values");
                t.radii = parse_number_list(datum.at("radii"), "datum.radii");
                t.values = parse_number_list(datum.at("values"), "datum.values");
                t.tail_left = datum_number("tail_left", 0.0);
                t.tail_right = datum_number("tail_right", 0.0);
                return {std::move(t), d};
            }
            return {Constant{datum_number("value", 0.0)}, d};
        } catch (const DomainError& e) {
            throw ConfigError("datum", e.what());
        }
    }
};

/// Parses key=value lines into `cfg` (blank lines and '#' comments allowed).
inline void parse_config_text(const std::string& text, ExperimentConfig& cfg, const std::string& source = "config") {
    std::istringstream in(text);
    std::string line;
    int number = 0;
    // datum.family must be applied before its parameters whatever the order
    std::vector<std::pair<std::string, std::string>> deferred;
    std::vector<std::string> deferred_where;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        ++number;
        const std::string where = source + ":" + std::to_string(number);
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where, "expected key=value");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!seen.insert(key).second) throw ConfigError(where, "duplicate key '" + key + "'");
        if (key.rfind("datum.", 0) == 0 && key != "datum.family") {
            deferred.emplace_back(key, value);
            deferred_where.push_back(where);
        } else {
            cfg.set(key, value, where);
        }
    }
    for (std::size_t i = 0; i < deferred.size(); ++i) cfg.set(deferred[i].first, deferred[i].second, deferred_where[i]);
}

inline ExperimentConfig parse_config(const std::string& text, const std::string& source = "config") {
    ExperimentConfig cfg;
    parse_config_text(text, cfg, source);
    return cfg;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path, "cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace cdh::cli
