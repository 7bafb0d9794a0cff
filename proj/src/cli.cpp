#include "trigibbs/cli.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "trigibbs/acceptance.hpp"
#include "trigibbs/cluster.hpp"
#include "trigibbs/config.hpp"
#include "trigibbs/errors.hpp"
#include "trigibbs/estimators.hpp"
#include "trigibbs/exact.hpp"
#include "trigibbs/glauber.hpp"
#include "trigibbs/graph.hpp"
#include "trigibbs/harness.hpp"
#include "trigibbs/ratefn.hpp"
#include "trigibbs/specfun.hpp"
#include "trigibbs/util.hpp"

namespace trigibbs {

namespace {

using nlohmann::json;

Graph parse_host(const std::string& spec) {
    auto tail = [&spec](std::size_t at) { return spec.substr(at); };
    if (spec.rfind("complete:", 0) == 0) return complete_graph(std::stoi(tail(9)));
    if (spec.rfind("cycle:", 0) == 0) return cycle_graph(std::stoi(tail(6)));
    if (spec.rfind("path:", 0) == 0) return path_graph(std::stoi(tail(5)));
    if (spec.rfind("bipartite:", 0) == 0) {
        std::string rest = tail(10);
        auto comma = rest.find(',');
        if (comma == std::string::npos)
            throw ConfigError("bipartite host needs two part sizes, e.g. bipartite:4,4");
        return complete_bipartite(std::stoi(rest.substr(0, comma)),
                                  std::stoi(rest.substr(comma + 1)));
    }
    std::ifstream in(spec);
    if (!in) throw ConfigError("cannot open host graph file: " + spec);
    return Graph::from_edge_list(in);
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

int do_rate(double c, double eta, double b, bool has_b, std::ostream& out,
            std::ostream& err) {
    json j;
    if (has_b) {
        j["b"] = b;
        j["eta"] = eta;
        j["rate_gnm"] = ratefn::rate_gnm(b, eta);
        j["regime"] = ratefn::to_string(ratefn::gnm_regime(b, eta));
        j["threshold_b"] = ratefn::gnm_threshold_b(eta);
        err << "sparse-count rate at b=" << b << ", eta=" << eta << "\n";
    } else {
        ratefn::RateResult r = ratefn::rate_gnp(c, eta);
        j["c"] = c;
        j["eta"] = eta;
        j["rate"] = r.rate;
        j["zeta"] = r.zeta;
        j["q_coeff"] = r.q_coeff;
        j["regime"] = ratefn::to_string(r.regime);
        j["c_bar"] = ratefn::c_bar(eta);
        j["eta_star"] = ratefn::eta_star();
        j["poisson_bound"] = ratefn::poisson_bound(c, eta);
        j["replica_symmetric_limit"] = -0.5 * c * specfun::entropy_h(std::cbrt(eta));
        if (eta > 0.0) j["large_c_limit"] = ratefn::large_c_limit(eta);
        err << "rate at c=" << c << ", eta=" << eta << ": " << r.rate << "\n";
    }
    out << j.dump(2) << "\n";
    return 0;
}

int do_exact(int n, double lambda, double zeta, const std::string& host_spec,
             bool lower_tail, double p, double eta, std::ostream& out, std::ostream& err) {
    json j;
    if (lower_tail) {
        j["n"] = n;
        j["p"] = p;
        j["eta"] = eta;
        j["probability"] = exact::exact_lower_tail(n, p, eta);
        err << "exact lower-tail probability: " << j["probability"] << "\n";
    } else if (!host_spec.empty()) {
        Graph h = parse_host(host_spec);
        exact::ExactSummary s = exact::exact_Xi(h, lambda, zeta);
        j["host_n"] = h.n();
        j["host_edges"] = h.edge_count();
        j["lambda"] = lambda;
        j["zeta"] = zeta;
        j["log_xi"] = s.log_partition;
        j["mean_size"] = s.expect_size;
        j["mean_internal_edges"] = s.expect_conflicts;
        err << "exact subset-measure enumeration on " << h.n() << " vertices\n";
    } else {
        exact::ExactSummary s = exact::exact_Z({n, lambda, zeta});
        j["n"] = n;
        j["lambda"] = lambda;
        j["zeta"] = zeta;
        j["log_z"] = s.log_partition;
        j["mean_edges"] = s.expect_size;
        j["mean_triangles"] = s.expect_conflicts;
        err << "exact graph-measure enumeration at n=" << n << "\n";
    }
    out << j.dump(2) << "\n";
    return 0;
}

int do_sample(int n, double lambda, double zeta, double c, bool has_c,
              const std::string& host_spec, std::int64_t sweeps, std::int64_t thin,
              int chains, std::int64_t burnin, std::uint64_t seed,
              const std::string& obs_csv, const std::string& out_path, std::ostream& out,
              std::ostream& err) {
    std::vector<glauber::RunRecord> recs;
    std::vector<std::string> obs = split_csv(obs_csv);
    if (!host_spec.empty()) {
        Graph host = parse_host(host_spec);
        if (obs.empty()) obs = {"size", "internal_edges"};
        for (int ch = 0; ch < chains; ++ch)
            recs.push_back(glauber::run_chain_nu(host, lambda, zeta, sweeps, thin, obs, seed,
                                                 static_cast<std::uint64_t>(ch), burnin));
    } else {
        GibbsParams pr = has_c ? GibbsParams::from_scaled(n, c, zeta)
                               : GibbsParams{n, lambda, zeta};
        if (obs.empty()) obs = {"edges", "triangles"};
        for (int ch = 0; ch < chains; ++ch)
            recs.push_back(glauber::run_chain_mu(pr, sweeps, thin, obs, seed,
                                                 static_cast<std::uint64_t>(ch), nullptr,
                                                 burnin));
    }

    std::ofstream file;
    std::ostream* sink = &out;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::trunc);
        if (!file) throw ConfigError("cannot write " + out_path);
        sink = &file;
    }
    *sink << "# seed=" << seed << " n=" << n << " lambda=" << lambda << " zeta=" << zeta
          << " sweeps=" << sweeps << " thin=" << thin << " chains=" << chains << "\n";
    *sink << "chain,sample";
    for (const auto& o : obs) *sink << "," << o;
    *sink << "\n";
    for (const auto& rec : recs) {
        const std::size_t rows = rec.series.empty() ? 0 : rec.series[0].size();
        for (std::size_t r = 0; r < rows; ++r) {
            *sink << rec.chain_index << "," << r;
            for (const auto& col : rec.series) *sink << "," << harness::csv_cell(col[r]);
            *sink << "\n";
        }
    }
    err << "sampled " << chains << " chain(s) x " << sweeps << " sweeps";
    if (!out_path.empty()) err << " -> " << out_path;
    err << "\n";
    for (std::size_t i = 0; i < obs.size(); ++i) {
        double total = 0.0, count = 0.0;
        for (const auto& rec : recs)
            for (double v : rec.series[i]) total += v, ++count;
        err << "  mean " << obs[i] << " = " << (count > 0 ? total / count : 0.0) << "\n";
    }
    return 0;
}

int do_estimate(const std::string& mode, int n, double lambda, double zeta, double c,
                bool has_c, double eta, bool has_eta, int chains, std::int64_t sweeps,
                int grid, double p, std::int64_t trials, std::uint64_t seed,
                std::ostream& out, std::ostream& err) {
    json j;
    double zeta_eff = zeta;
    if (has_eta && has_c) zeta_eff = ratefn::solve_zeta(c, eta);
    if (mode == "density") {
        GibbsParams pr = has_c ? GibbsParams::from_scaled(n, c, zeta_eff)
                               : GibbsParams{n, lambda, zeta_eff};
        auto rep = estimators::estimate_densities(pr, chains, sweeps, seed);
        j = {{"n", pr.n},
             {"lambda", pr.lambda},
             {"zeta", pr.zeta},
             {"c", pr.c()},
             {"chains", rep.chains},
             {"sweeps", rep.sweeps},
             {"mean_edges", rep.mean_edges},
             {"stderr_edges", rep.stderr_edges},
             {"mean_triangles", rep.mean_triangles},
             {"stderr_triangles", rep.stderr_triangles},
             {"mean_degree", rep.mean_degree},
             {"predicted_edges", rep.predicted_edges},
             {"predicted_triangles", rep.predicted_triangles},
             {"predicted_degree_coeff", rep.predicted_degree_coeff},
             {"regime", ratefn::to_string(rep.regime)},
             {"small_n", rep.small_n}};
        if (pr.zeta >= 1e-6)
            j["fixed_point_residual"] = estimators::fixed_point_residual(rep, pr);
        err << "density estimate at n=" << pr.n << ": E|G|=" << rep.mean_edges << ", EX="
            << rep.mean_triangles << "\n";
    } else if (mode == "logz") {
        const double c_target = has_c ? c : GibbsParams{n, lambda, zeta_eff}.c();
        auto res = estimators::log_z_by_integration(n, c_target, zeta_eff, grid, chains, seed);
        j = {{"n", n},
             {"c", c_target},
             {"zeta", zeta_eff},
             {"grid", res.grid},
             {"log_z", res.log_z},
             {"quadrature_error", res.quadrature_error},
             {"mc_error", res.mc_error},
             {"error_budget", res.error_budget},
             {"log_z_normalized", res.log_z / std::pow(static_cast<double>(n), 1.5)}};
        err << "thermodynamic integration: log Z = " << res.log_z << " +- "
            << res.error_budget << "\n";
    } else if (mode == "structure") {
        GibbsParams pr = has_c ? GibbsParams::from_scaled(n, c, zeta_eff)
                               : GibbsParams{n, lambda, zeta_eff};
        auto rep = estimators::structure_report(pr, chains, sweeps, seed);
        j = {{"n", pr.n},
             {"lambda", pr.lambda},
             {"zeta", pr.zeta},
             {"maxcut", rep.maxcut},
             {"cutnorm_normalized", rep.cutnorm_norm},
             {"degree_spread", rep.degree_spread},
             {"degree_spread_bound", rep.spread_bound},
             {"states", rep.states}};
        err << "structure over " << rep.states << " states: maxcut=" << rep.maxcut << "\n";
    } else if (mode == "tail") {
        if (!(p > 0.0)) throw ConfigError("tail mode needs --p");
        auto rep = estimators::lower_tail_mc(n, p, has_eta ? eta : 0.0, trials, seed);
        j = {{"n", n},
             {"p", p},
             {"eta", has_eta ? eta : 0.0},
             {"trials", rep.trials},
             {"estimate", rep.estimate},
             {"stderr", rep.stderr_}};
        err << "lower-tail Monte Carlo: " << rep.estimate << " +- " << rep.stderr_ << "\n";
    } else {
        throw ConfigError("unknown estimate mode: " + mode);
    }
    out << j.dump(2) << "\n";
    return 0;
}

int do_cluster(const std::string& host_spec, double lambda, double zeta, int k,
               bool compare_exact, double tree_delta, bool has_tree, std::ostream& out,
               std::ostream& err) {
    json j;
    if (has_tree) {
        auto t = cluster::tree_approx(tree_delta, lambda, zeta);
        j = {{"Delta", t.Delta},
             {"lambda", lambda},
             {"zeta", zeta},
             {"f", t.f_value},
             {"alpha", t.alpha_value},
             {"rho", t.rho_value}};
        err << "regular-tree closed forms at Delta=" << tree_delta << "\n";
    } else {
        Graph h = parse_host(host_spec);
        auto tr = cluster::truncated_log_xi(h, lambda, zeta, k);
        j = {{"host_n", h.n()},
             {"host_edges", h.edge_count()},
             {"lambda", lambda},
             {"zeta", zeta},
             {"k", k},
             {"value", tr.value},
             {"tail_bound", tr.tail_bound},
             {"gamma", tr.gamma},
             {"counts_by_size", tr.counts_by_size},
             {"signed_by_size", tr.signed_by_size},
             {"abs_by_size", tr.abs_by_size}};
        if (compare_exact) {
            double ex = exact::exact_Xi(h, lambda, zeta).log_partition;
            j["exact_log_xi"] = ex;
            j["abs_error"] = std::abs(tr.value - ex);
            j["within_tail_bound"] = std::abs(tr.value - ex) <= tr.tail_bound;
        }
        err << "truncated expansion through size " << k << ": " << tr.value
            << " (tail bound " << tr.tail_bound << ")\n";
    }
    out << j.dump(2) << "\n";
    return 0;
}

int do_experiment(const std::string& preset, const std::string& config_path,
                  const std::string& out_dir, std::uint64_t seed, bool seed_given,
                  std::ostream& out, std::ostream& err) {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (seed_given) cfg.seed = seed;
    harness::PresetRecord rec = harness::run_preset(preset, cfg);
    out << rec.summary.dump(2) << "\n";
    err << "preset " << rec.config.preset << " wrote:";
    for (const auto& f : rec.files) err << " " << f;
    err << "\n";
    return 0;
}

int do_verify(const std::string& suite, std::uint64_t seed, std::ostream& out,
              std::ostream& err) {
    static const std::pair<const char*, int> kSuites[] = {
        {"constants", 1}, {"oracle-small", 2}, {"derivatives", 3},
        {"cluster", 4},   {"density", 5},      {"integration", 6},
        {"structure", 7}, {"dynamics", 8},     {"asymptotics", 9}};
    std::vector<int> ids;
    if (suite == "all") {
        for (int i = 1; i <= 10; ++i) ids.push_back(i);
    } else {
        for (const auto& [name, id] : kSuites)
            if (suite == name) ids.push_back(id);
        if (ids.empty()) throw ConfigError("unknown suite: " + suite);
    }
    int failed = 0;
    for (int id : ids) {
        auto r = acceptance::run_criterion(id, seed, out);
        if (!r.informational && !r.pass) ++failed;
    }
    err << ids.size() - failed << "/" << ids.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}

}  // namespace

int cli_dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"triangle-penalized Gibbs measures: rate functions, exact enumeration, "
                 "Glauber sampling, cluster expansions"};
    app.require_subcommand(1);

    // rate
    auto* rate = app.add_subcommand("rate", "rate function and bounds at (c, eta) or (b, eta)");
    double r_c = 0.0, r_eta = 0.0, r_b = 0.0;
    auto* r_c_opt = rate->add_option("--c", r_c, "edge-density scale c = p sqrt(n)");
    rate->add_option("--eta", r_eta, "lower-tail fraction in [0,1]");
    auto* r_b_opt = rate->add_option("--b", r_b, "fixed-edge-count scale b (G(n,m) variant)");

    // exact
    auto* ex = app.add_subcommand("exact", "exact enumeration oracles");
    int e_n = 5;
    double e_lambda = 0.1, e_zeta = 0.0, e_p = 0.0, e_eta = 0.0;
    std::string e_host;
    bool e_tail = false;
    ex->add_option("--n", e_n, "vertex count");
    ex->add_option("--lambda", e_lambda, "edge activity");
    ex->add_option("--zeta", e_zeta, "triangle penalty in [0,1]");
    ex->add_option("--host", e_host, "host graph (file or complete:k|cycle:k|path:k|bipartite:a,b)");
    ex->add_flag("--lower-tail", e_tail, "exact lower-tail probability (needs --p)");
    ex->add_option("--p", e_p, "edge probability for --lower-tail");
    ex->add_option("--eta", e_eta, "tail fraction for --lower-tail");

    // sample
    auto* sa = app.add_subcommand("sample", "run Glauber dynamics, emit observable series");
    int s_n = 20, s_chains = 1;
    double s_lambda = 0.1, s_zeta = 0.0, s_c = 0.0;
    std::int64_t s_sweeps = 100, s_thin = 1, s_burnin = -1;
    std::uint64_t s_seed = 1;
    std::string s_host, s_obs, s_out;
    sa->add_option("--n", s_n, "vertex count");
    sa->add_option("--lambda", s_lambda, "edge activity");
    sa->add_option("--zeta", s_zeta, "triangle penalty");
    auto* s_c_opt = sa->add_option("--c", s_c, "set lambda from c = p sqrt(n)");
    sa->add_option("--host", s_host, "sample the subset measure on this host graph");
    sa->add_option("--sweeps", s_sweeps, "measured sweeps after burn-in");
    sa->add_option("--thin", s_thin, "sweeps between measurements");
    sa->add_option("--chains", s_chains, "independent chains");
    sa->add_option("--burnin", s_burnin, "burn-in steps (-1: default schedule)");
    sa->add_option("--seed", s_seed, "master seed");
    sa->add_option("--obs", s_obs, "comma-separated observables");
    sa->add_option("--out", s_out, "CSV path (default: stdout)");

    // estimate
    auto* es = app.add_subcommand("estimate", "Monte Carlo estimators with error bars");
    std::string m_mode = "density";
    int m_n = 100, m_chains = 2, m_grid = 16;
    double m_lambda = 0.1, m_zeta = 0.0, m_c = 0.0, m_eta = 0.0, m_p = 0.0;
    std::int64_t m_sweeps = 600, m_trials = 100000;
    std::uint64_t m_seed = 1;
    es->add_option("--mode", m_mode, "density | logz | structure | tail");
    es->add_option("--n", m_n, "vertex count");
    es->add_option("--lambda", m_lambda, "edge activity");
    es->add_option("--zeta", m_zeta, "triangle penalty");
    auto* m_c_opt = es->add_option("--c", m_c, "edge-density scale");
    auto* m_eta_opt = es->add_option("--eta", m_eta, "tail fraction (with --c: solves zeta)");
    es->add_option("--chains", m_chains, "independent chains");
    es->add_option("--sweeps", m_sweeps, "measured sweeps per chain");
    es->add_option("--grid", m_grid, "grid points for logz mode");
    es->add_option("--p", m_p, "edge probability for tail mode");
    es->add_option("--trials", m_trials, "trials for tail mode");
    es->add_option("--seed", m_seed, "master seed");

    // cluster
    auto* cl = app.add_subcommand("cluster", "truncated cluster expansion of log Xi");
    std::string c_host = "cycle:10";
    double c_lambda = 0.05, c_zeta = 0.5, c_delta = 0.0;
    int c_k = 6;
    bool c_exact = false;
    cl->add_option("--host", c_host, "host graph (file or complete:k|cycle:k|path:k|bipartite:a,b)");
    cl->add_option("--lambda", c_lambda, "vertex activity");
    cl->add_option("--zeta", c_zeta, "edge penalty");
    cl->add_option("--k", c_k, "truncation order (<= 8)");
    cl->add_flag("--exact", c_exact, "compare against exact enumeration (n <= 22)");
    auto* c_tree = cl->add_option("--tree-delta", c_delta, "closed forms on the Delta-regular tree");

    // experiment
    auto* xp = app.add_subcommand("experiment", "run a named preset, write CSV/JSON");
    std::string x_preset, x_config, x_out;
    std::uint64_t x_seed = 1;
    xp->add_option("--preset", x_preset, "fig_rate_compare | fig_ldrate | fig_density | acceptance")
        ->required();
    xp->add_option("--config", x_config, "config file path");
    xp->add_option("--out", x_out, "output directory");
    auto* x_seed_opt = xp->add_option("--seed", x_seed, "master seed");

    // verify
    auto* vf = app.add_subcommand("verify", "run acceptance criteria");
    std::string v_suite = "all";
    std::uint64_t v_seed = 20260814;
    vf->add_option("--suite", v_suite,
                   "all | constants | oracle-small | derivatives | cluster | density | "
                   "integration | structure | dynamics | asymptotics");
    vf->add_option("--seed", v_seed, "master seed");

    std::vector<std::string> argv_s;
    argv_s.push_back("trigibbs");
    argv_s.insert(argv_s.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    argv.reserve(argv_s.size());
    for (const auto& s : argv_s) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (rate->parsed()) {
            if (r_b_opt->count() == 0 && r_c_opt->count() == 0)
                throw ConfigError("rate needs --c or --b");
            return do_rate(r_c, r_eta, r_b, r_b_opt->count() > 0, out, err);
        }
        if (ex->parsed())
            return do_exact(e_n, e_lambda, e_zeta, e_host, e_tail, e_p, e_eta, out, err);
        if (sa->parsed())
            return do_sample(s_n, s_lambda, s_zeta, s_c, s_c_opt->count() > 0, s_host,
                             s_sweeps, s_thin, s_chains, s_burnin, s_seed, s_obs, s_out,
                             out, err);
        if (es->parsed())
            return do_estimate(m_mode, m_n, m_lambda, m_zeta, m_c, m_c_opt->count() > 0,
                               m_eta, m_eta_opt->count() > 0, m_chains, m_sweeps, m_grid,
                               m_p, m_trials, m_seed, out, err);
        if (cl->parsed())
            return do_cluster(c_host, c_lambda, c_zeta, c_k, c_exact, c_delta,
                              c_tree->count() > 0, out, err);
        if (xp->parsed())
            return do_experiment(x_preset, x_config, x_out, x_seed,
                                 x_seed_opt->count() > 0, out, err);
        if (vf->parsed()) return do_verify(v_suite, v_seed, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "usage error: no subcommand\n";
    return 2;
}

}  // namespace trigibbs
