#include "trigibbs/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "trigibbs/errors.hpp"
#include "trigibbs/glauber.hpp"
#include "trigibbs/util.hpp"

namespace trigibbs {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

double parse_double(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for '" + key + "': " + s);
    }
}

std::int64_t parse_int(const std::string& s, const std::string& key) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ConfigError("bad integer value for '" + key + "': " + s);
    return v;
}

std::uint64_t parse_u64(const std::string& s, const std::string& key) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ConfigError("bad unsigned value for '" + key + "': " + s);
    return v;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F fmt) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += fmt(xs[i]);
    }
    return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    cfg.output_dir.clear();
    std::string section;
    std::stringstream ss(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(ss, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "experiment" && section != "grid" && section != "mcmc" &&
                section != "tolerance")
                throw ConfigError("unknown section [" + section + "]");
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (section == "experiment") {
            if (key == "preset") cfg.preset = val;
            else if (key == "seed") cfg.seed = parse_u64(val, key);
            else if (key == "output_dir") cfg.output_dir = val;
            else throw ConfigError("unknown key '" + key + "' in [experiment]");
        } else if (section == "grid") {
            auto items = split_list(val);
            if (key == "c" || key == "eta" || key == "zeta" || key == "b") {
                std::vector<double> xs;
                for (const auto& it : items) xs.push_back(parse_double(it, key));
                if (key == "c") cfg.grid_c = xs;
                else if (key == "eta") cfg.grid_eta = xs;
                else if (key == "zeta") cfg.grid_zeta = xs;
                else cfg.grid_b = xs;
            } else if (key == "n") {
                cfg.grid_n.clear();
                for (const auto& it : items)
                    cfg.grid_n.push_back(static_cast<int>(parse_int(it, key)));
            } else {
                throw ConfigError("unknown key '" + key + "' in [grid]");
            }
        } else if (section == "mcmc") {
            if (key == "chains") cfg.chains = static_cast<int>(parse_int(val, key));
            else if (key == "sweeps") cfg.sweeps = parse_int(val, key);
            else if (key == "thin") cfg.thin = parse_int(val, key);
            else if (key == "burnin") cfg.burnin = parse_int(val, key);
            else if (key == "max_steps") cfg.max_steps = parse_int(val, key);
            else throw ConfigError("unknown key '" + key + "' in [mcmc]");
        } else if (section == "tolerance") {
            cfg.tolerance[key] = parse_double(val, key);
        } else {
            throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::string out;
    out += "[experiment]\n";
    out += "preset = " + cfg.preset + "\n";
    out += "seed = " + std::to_string(cfg.seed) + "\n";
    out += "output_dir = " + cfg.output_dir + "\n";
    out += "[grid]\n";
    out += "c = " + join(cfg.grid_c, fmt_double) + "\n";
    out += "eta = " + join(cfg.grid_eta, fmt_double) + "\n";
    out += "n = " + join(cfg.grid_n, [](int v) { return std::to_string(v); }) + "\n";
    out += "zeta = " + join(cfg.grid_zeta, fmt_double) + "\n";
    out += "b = " + join(cfg.grid_b, fmt_double) + "\n";
    out += "[mcmc]\n";
    out += "chains = " + std::to_string(cfg.chains) + "\n";
    out += "sweeps = " + std::to_string(cfg.sweeps) + "\n";
    out += "thin = " + std::to_string(cfg.thin) + "\n";
    out += "burnin = " + std::to_string(cfg.burnin) + "\n";
    out += "max_steps = " + std::to_string(cfg.max_steps) + "\n";
    out += "[tolerance]\n";
    for (const auto& [k, v] : cfg.tolerance) out += k + " = " + fmt_double(v) + "\n";
    return out;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    return fnv1a64(serialize_config(cfg));
}

void validate_config(const ExperimentConfig& cfg) {
    static const char* kPresets[] = {"fig_rate_compare", "fig_ldrate", "fig_density",
                                     "acceptance"};
    bool known = false;
    for (const char* p : kPresets) known = known || cfg.preset == p;
    if (!known) throw ConfigError("unknown preset: " + cfg.preset);
    for (double e : cfg.grid_eta)
        if (!(e >= 0.0 && e < 1.0)) throw ConfigError("eta must lie in [0,1)");
    for (int n : cfg.grid_n)
        if (n <= 0) throw ConfigError("n must be positive");
    for (double z : cfg.grid_zeta)
        if (!(z >= 0.0 && z <= 1.0)) throw ConfigError("zeta must lie in [0,1]");
    for (double c : cfg.grid_c)
        if (!(c >= 0.0)) throw ConfigError("c must be nonnegative");
    for (double b : cfg.grid_b)
        if (!(b >= 0.0)) throw ConfigError("b must be nonnegative");
    if (cfg.chains < 1) throw ConfigError("chains must be >= 1");
    if (cfg.sweeps < 1) throw ConfigError("sweeps must be >= 1");
    if (cfg.thin < 1) throw ConfigError("thin must be >= 1");
    if (cfg.max_steps > 0) {
        std::int64_t burn = cfg.burnin;
        if (burn < 0) {
            burn = 0;
            for (int n : cfg.grid_n)
                burn = std::max(burn, glauber::default_burnin_mu(n));
        }
        if (cfg.max_steps < burn)
            throw ConfigError("max_steps is below the burn-in it must contain");
    }
}

}  // namespace trigibbs
