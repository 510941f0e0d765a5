#pragma once

// Flat `key = value` run descriptions with `#` comments.

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <tuple>
#include <utility>

#include "tmjcm/cli/csv.hpp"
#include "tmjcm/dynamics.hpp"

namespace tmjcm::cli {

/// Invalid configuration; key() names the offending entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error("config key '" + key + "': " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct Sweep {
    double t_min = 0.0;
    double t_max = 20.0;
    std::size_t steps = 2001;

    bool operator==(const Sweep&) const = default;
};

struct RunConfig {
    SystemConfig system;
    Sweep sweep;

    bool operator==(const RunConfig&) const = default;
};

inline const std::set<std::string, std::less<>>& config_keys() {
    static const std::set<std::string, std::less<>> keys{
        "alpha1_re", "alpha1_im", "eps1", "alpha2_re", "alpha2_im", "eps2", "k1",   "k2",
        "varphi",    "phi",       "dim1", "dim2",      "t_min",     "t_max", "steps"};
    return keys;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_real(const std::string& key, std::string_view text) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v))
        throw ConfigError(key, "expected a finite real number, got '" + std::string(text) + "'");
    return v;
}

inline long long parse_integer(const std::string& key, std::string_view text) {
    long long v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw ConfigError(key, "expected an integer, got '" + std::string(text) + "'");
    return v;
}

}  // namespace detail

/// Missing keys take their defaults; dim1/dim2 default to the automatic
/// truncation for the given amplitudes.
inline RunConfig parse_config(std::string_view text) {
    std::map<std::string, std::string, std::less<>> entries;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = text.find('\n', pos);
        std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(std::string(line), "line " + std::to_string(line_no) + " is not of the form key = value");
        const std::string key(detail::trim(line.substr(0, eq)));
        const std::string value(detail::trim(line.substr(eq + 1)));
        if (!config_keys().contains(key)) throw ConfigError(key, "unknown key");
        if (value.empty()) throw ConfigError(key, "missing value");
        if (!entries.emplace(key, value).second) throw ConfigError(key, "given more than once");
    }

    auto real = [&](const char* key, double fallback) {
        const auto it = entries.find(key);
        return it == entries.end() ? fallback : detail::parse_real(key, it->second);
    };
    auto integer = [&](const char* key, long long fallback) {
        const auto it = entries.find(key);
        return it == entries.end() ? fallback : detail::parse_integer(key, it->second);
    };

    RunConfig rc;
    SystemConfig& s = rc.system;
    s.mode1.alpha = {real("alpha1_re", 0.0), real("alpha1_im", 0.0)};
    s.mode2.alpha = {real("alpha2_re", 0.0), real("alpha2_im", 0.0)};
    for (const auto& [key, spec] : {std::pair<const char*, CatStateSpec*>{"eps1", &s.mode1}, {"eps2", &s.mode2}}) {
        const long long e = integer(key, 0);
        if (e < -1 || e > 1) throw ConfigError(key, "must be -1, 0 or 1");
        spec->epsilon = static_cast<int>(e);
        if (e == -1 && spec->alpha == cplx{}) throw ConfigError(key, "odd cat needs a nonzero amplitude");
    }
    const long long k1 = integer("k1", 1);
    const long long k2 = integer("k2", 1);
    if (k1 < 0 || k1 > 64) throw ConfigError("k1", "must lie in [0, 64]");
    if (k2 < 0 || k2 > 64) throw ConfigError("k2", "must lie in [0, 64]");
    if (k1 + k2 < 1) throw ConfigError("k1", "k1 + k2 must be at least 1");
    s.k1 = static_cast<int>(k1);
    s.k2 = static_cast<int>(k2);
    s.varphi = real("varphi", 0.0);
    s.phi = real("phi", 0.0);

    const SystemConfig automatic = make_config(s.mode1, s.mode2, s.k1, s.k2, s.varphi, s.phi);
    for (const auto& [key, k, dim, fallback] :
         {std::tuple<const char*, long long, std::size_t*, std::size_t>{"dim1", k1, &s.dim1, automatic.dim1},
          {"dim2", k2, &s.dim2, automatic.dim2}}) {
        const long long d = integer(key, static_cast<long long>(fallback));
        if (d <= k || d > 4096) throw ConfigError(key, "must exceed the matching k and be at most 4096");
        *dim = static_cast<std::size_t>(d);
    }

    rc.sweep.t_min = real("t_min", rc.sweep.t_min);
    rc.sweep.t_max = real("t_max", rc.sweep.t_max);
    if (!(rc.sweep.t_max > rc.sweep.t_min)) throw ConfigError("t_max", "must exceed t_min");
    const long long steps = integer("steps", static_cast<long long>(rc.sweep.steps));
    if (steps < 2 || steps > 10'000'000) throw ConfigError("steps", "must lie in [2, 10000000]");
    rc.sweep.steps = static_cast<std::size_t>(steps);
    validate(s);
    return rc;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("file", "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

/// Emits every key, so parse_config(emit_config(rc)) == rc.
inline std::string emit_config(const RunConfig& rc) {
    const SystemConfig& s = rc.system;
    std::string out;
    auto put = [&](const char* key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    put("alpha1_re", format_shortest(s.mode1.alpha.real()));
    put("alpha1_im", format_shortest(s.mode1.alpha.imag()));
    put("eps1", std::to_string(s.mode1.epsilon));
    put("alpha2_re", format_shortest(s.mode2.alpha.real()));
    put("alpha2_im", format_shortest(s.mode2.alpha.imag()));
    put("eps2", std::to_string(s.mode2.epsilon));
    put("k1", std::to_string(s.k1));
    put("k2", std::to_string(s.k2));
    put("varphi", format_shortest(s.varphi));
    put("phi", format_shortest(s.phi));
    put("dim1", std::to_string(s.dim1));
    put("dim2", std::to_string(s.dim2));
    put("t_min", format_shortest(rc.sweep.t_min));
    put("t_max", format_shortest(rc.sweep.t_max));
    put("steps", std::to_string(rc.sweep.steps));
    return out;
}

}  // namespace tmjcm::cli
