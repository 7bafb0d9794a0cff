#include "trigibbs/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "trigibbs/acceptance.hpp"
#include "trigibbs/errors.hpp"
#include "trigibbs/ratefn.hpp"
#include "trigibbs/specfun.hpp"

namespace trigibbs::harness {

namespace {

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string utc_now() {
    std::time_t tt = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&tt, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<double> linear_grid(double start, double stop, double step) {
    std::vector<double> xs;
    const auto count = static_cast<int>(std::llround((stop - start) / step));
    for (int i = 0; i <= count; ++i) xs.push_back(start + i * step);
    return xs;
}

void write_csv(const std::string& path, std::uint64_t hash, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path);
    out << "# config_hash=" << hash_hex(hash) << "\n" << header << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << csv_cell(row[i]);
        out << "\n";
    }
}

}  // namespace

std::string csv_cell(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string resolve_output_dir(const ExperimentConfig& cfg) {
    if (!cfg.output_dir.empty()) return cfg.output_dir;
    if (const char* env = std::getenv("TRIGIBBS_OUT"); env && *env) return env;
    return "out";
}

PresetRecord run_preset(const std::string& name, ExperimentConfig cfg) {
    if (!name.empty()) cfg.preset = name;
    validate_config(cfg);

    PresetRecord rec;
    rec.config = cfg;
    rec.hash = config_hash(cfg);
    const std::string dir = resolve_output_dir(cfg);
    std::filesystem::create_directories(dir);

    nlohmann::json annotations;
    const std::string started = utc_now();

    if (cfg.preset == "acceptance") {
        const std::string txt = dir + "/acceptance.txt";
        std::ofstream out(txt, std::ios::trunc);
        if (!out) throw ConfigError("cannot write " + txt);
        auto results = acceptance::run_all(cfg.seed, out);
        nlohmann::json items = nlohmann::json::array();
        bool ok = true;
        for (const auto& r : results) {
            items.push_back({{"id", r.id},
                             {"name", r.name},
                             {"pass", r.pass},
                             {"informational", r.informational},
                             {"seconds", r.seconds}});
            ok = ok && (r.pass || r.informational);
        }
        annotations["criteria"] = items;
        annotations["all_pass"] = ok;
        rec.files.push_back(txt);
    } else if (cfg.preset == "fig_rate_compare") {
        const double eta = cfg.grid_eta.empty() ? 0.5 : cfg.grid_eta[0];
        const auto cs = cfg.grid_c.empty() ? linear_grid(0.05, 2.0, 0.05) : cfg.grid_c;
        std::vector<std::vector<double>> rows;
        for (double c : cs) {
            if (!(c > 0.0)) continue;
            const double c2 = c * c;
            const double rate = ratefn::rate_gnp(c, eta).rate;
            const double poisson = ratefn::poisson_bound(c, eta);
            const double rs = -0.5 * c * specfun::entropy_h(std::cbrt(eta));
            rows.push_back({c, rate / c2, poisson / c2, rs / c2});
        }
        const std::string csv = dir + "/fig_rate_compare.csv";
        write_csv(csv, rec.hash, "c,rate_scaled,poisson_scaled,replica_symmetric_scaled", rows);
        rec.files.push_back(csv);
        annotations["eta"] = eta;
        annotations["small_c_ratio_at_0.1"] =
            ratefn::rate_gnp(0.1, eta).rate / ratefn::poisson_bound(0.1, eta);
    } else if (cfg.preset == "fig_ldrate") {
        const auto cs = cfg.grid_c.empty() ? linear_grid(0.1, 6.0, 0.05) : cfg.grid_c;
        std::vector<std::vector<double>> rows;
        for (double c : cs) {
            if (!(c > 0.0)) continue;
            rows.push_back({c, ratefn::rate_trianglefree(c), -c / 4.0});
        }
        const std::string csv = dir + "/fig_ldrate.csv";
        write_csv(csv, rec.hash, "c,rate,reference", rows);
        rec.files.push_back(csv);
        annotations["crossing_c"] =
            ratefn::crossing_point(0.0, [](double c) { return -c / 4.0; });
    } else {  // fig_density
        const double eta = cfg.grid_eta.empty() ? 0.5 : cfg.grid_eta[0];
        const auto cs = cfg.grid_c.empty() ? linear_grid(0.1, 6.0, 0.05) : cfg.grid_c;
        const double cb = ratefn::c_bar(eta);
        std::vector<std::vector<double>> rows;
        int skipped = 0;
        for (double c : cs) {
            if (!(c > 0.0)) continue;
            if (c >= cb) {
                ++skipped;
                continue;
            }
            rows.push_back({c, ratefn::q_sqrt_n_coeff(c, eta) / c, 1.0, std::cbrt(eta)});
        }
        const std::string csv = dir + "/fig_density.csv";
        write_csv(csv, rec.hash, "c,q_over_p,ref_unconditioned,ref_localized", rows);
        rec.files.push_back(csv);
        annotations["eta"] = eta;
        annotations["ref_localized"] = std::cbrt(eta);
        annotations["rows_out_of_window"] = skipped;
    }

    rec.summary = {{"preset", cfg.preset},
                   {"version", kVersion},
                   {"config_hash", hash_hex(rec.hash)},
                   {"started_utc", started},
                   {"finished_utc", utc_now()},
                   {"seed", cfg.seed},
                   {"config", serialize_config(cfg)},
                   {"files", rec.files},
                   {"annotations", annotations}};

    const std::string json_path = dir + "/" + cfg.preset + "_summary.json";
    {
        std::ofstream out(json_path, std::ios::trunc);
        if (!out) throw ConfigError("cannot write " + json_path);
        out << rec.summary.dump(2) << "\n";
    }
    rec.files.push_back(json_path);
    {
        std::ofstream log(dir + "/runs.jsonl", std::ios::app);
        if (log) log << rec.summary.dump() << "\n";
    }
    return rec;
}

}  // namespace trigibbs::harness
