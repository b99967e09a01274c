// Command-line front end. Talks to the library only through the C API.
#include "ggm/ggm.h"

#include <CLI11.hpp>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
    int code = 1;
    Failure(const std::string& msg, int c) : std::runtime_error(msg), code(c) {}
};

void check(ggm_status st, const std::string& context) {
    if (st != GGM_OK)
        throw Failure(context + ": " + ggm_status_name(st) + ": " + ggm_last_error(),
                      static_cast<int>(st) + 1);
}

template <class T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};
using MatrixPtr = std::unique_ptr<ggm_matrix, Deleter<ggm_matrix, ggm_matrix_free>>;
using WeightsPtr = std::unique_ptr<ggm_weights, Deleter<ggm_weights, ggm_weights_free>>;
using EstimatePtr = std::unique_ptr<ggm_estimate, Deleter<ggm_estimate, ggm_estimate_free>>;
using ExperimentPtr =
    std::unique_ptr<ggm_experiment, Deleter<ggm_experiment, ggm_experiment_free>>;
using TablePtr = std::unique_ptr<ggm_table, Deleter<ggm_table, ggm_table_free>>;

double parse_number(const std::string& key, const std::string& text) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE)
        throw Failure("--weights: bad number for " + key + ": '" + text + "'", 2);
    return v;
}

// "rho=0.05,beta=0.1,rho_pair=0.05,beta_pair=0.05,lambda2=0.02"
std::map<std::string, double> parse_weights(const std::string& spec) {
    static const char* known[] = {"rho", "beta", "rho_pair", "beta_pair", "lambda2"};
    std::map<std::string, double> out{
        {"rho", 0.0}, {"beta", 0.0}, {"rho_pair", 0.0}, {"beta_pair", 0.0}, {"lambda2", 0.0}};
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw Failure("--weights: expected key=value, got '" + item + "'", 2);
        const std::string key = item.substr(0, eq);
        bool ok = false;
        for (const char* k : known)
            ok = ok || key == k;
        if (!ok)
            throw Failure("--weights: unknown key '" + key + "'", 2);
        out[key] = parse_number(key, item.substr(eq + 1));
    }
    return out;
}

struct SolveArgs {
    std::vector<std::string> covs;
    std::string weights;
    std::string method = "joint";
    std::string out;
    std::size_t max_iters = 2000;
    double tol = 1e-5;
    std::string admissible = "symmetric";
    bool penalize_diagonal = false;
};

std::vector<MatrixPtr> load_covs(const std::vector<std::string>& paths) {
    std::vector<MatrixPtr> covs;
    for (const auto& p : paths) {
        ggm_matrix* m = nullptr;
        check(ggm_matrix_read_csv(p.c_str(), &m), "reading " + p);
        covs.emplace_back(m);
    }
    return covs;
}

void write_estimate(const ggm_estimate* est, const std::string& dir, const std::string& header) {
    std::filesystem::create_directories(dir);
    const std::size_t k = ggm_estimate_layers(est);
    for (std::size_t i = 0; i < k; ++i) {
        const std::string tag = std::to_string(i + 1);
        check(ggm_matrix_write_csv(ggm_estimate_s(est, i), (dir + "/S_" + tag + ".csv").c_str()),
              "writing S_" + tag);
        check(ggm_matrix_write_csv(ggm_estimate_p(est, i), (dir + "/P_" + tag + ".csv").c_str()),
              "writing P_" + tag);
    }
    std::ofstream f(dir + "/manifest.txt");
    f << header;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", ggm_estimate_objective(est));
    f << "objective=" << buf << "\n"
      << "iterations=" << ggm_estimate_iterations(est) << "\n"
      << "converged=" << ggm_estimate_converged(est) << "\n"
      << "layers=" << k << "\n";
    if (!f)
        throw Failure("cannot write " + dir + "/manifest.txt", 7);
}

std::string describe(const SolveArgs& a, const std::string& command) {
    std::ostringstream h;
    h << "command=" << command << "\n"
      << "version=" << ggm_version() << "\n"
      << "method=" << a.method << "\n"
      << "weights=" << a.weights << "\n";
    for (std::size_t i = 0; i < a.covs.size(); ++i)
        h << "cov_" << i + 1 << "=" << a.covs[i] << "\n";
    return h.str();
}

WeightsPtr make_weights(std::size_t k, const std::map<std::string, double>& w) {
    ggm_weights* raw = nullptr;
    check(ggm_weights_create(k, &raw), "weights");
    WeightsPtr out(raw);
    check(ggm_weights_set_uniform(raw, w.at("rho"), w.at("beta"), w.at("rho_pair"),
                                  w.at("beta_pair")),
          "weights");
    return out;
}

void cmd_solve(const SolveArgs& a) {
    const auto w = parse_weights(a.weights);
    auto covs = load_covs(a.covs);
    std::vector<const ggm_matrix*> raw;
    for (const auto& c : covs)
        raw.push_back(c.get());

    ggm_solver_options opts;
    ggm_solver_options_default(&opts);
    opts.max_iters = a.max_iters;
    opts.tol_primal = a.tol;
    opts.tol_dual = a.tol;
    opts.penalize_diagonal = a.penalize_diagonal ? 1 : 0;
    if (a.admissible == "nonpositive_offdiag")
        opts.admissible_set = GGM_ADMISSIBLE_NONPOSITIVE_OFFDIAG;
    else if (a.admissible != "symmetric")
        throw Failure("--admissible-set: expected symmetric or nonpositive_offdiag", 2);

    ggm_estimate* est = nullptr;
    if (a.method == "joint") {
        auto wp = make_weights(raw.size(), w);
        check(ggm_solve_joint(raw.data(), raw.size(), wp.get(), &opts, &est), "joint solve");
    } else if (a.method == "ggl") {
        check(ggm_solve_ggl(raw.data(), raw.size(), w.at("rho"), w.at("lambda2"), &opts, &est),
              "ggl solve");
    } else if (a.method == "lvgl" || a.method == "gl") {
        if (raw.size() != 1)
            throw Failure("--method " + a.method + " takes exactly one covariance", 2);
        if (a.method == "lvgl")
            check(ggm_solve_lvgl(raw[0], w.at("rho"), w.at("beta"), &opts, &est), "lvgl solve");
        else
            check(ggm_solve_gl(raw[0], w.at("rho"), &opts, &est), "gl solve");
    } else {
        throw Failure("--method: expected joint, ggl, lvgl or gl", 2);
    }
    EstimatePtr hold(est);
    write_estimate(est, a.out, describe(a, "solve"));
    std::cout << "wrote " << ggm_estimate_layers(est) << " layer(s) to " << a.out
              << " (iterations " << ggm_estimate_iterations(est)
              << (ggm_estimate_converged(est) ? ", converged" : ", not converged") << ")\n";
}

void cmd_oracle(const SolveArgs& a, std::size_t budget) {
    const auto w = parse_weights(a.weights);
    auto covs = load_covs(a.covs);
    std::vector<const ggm_matrix*> raw;
    for (const auto& c : covs)
        raw.push_back(c.get());
    ggm_estimate* est = nullptr;
    if (a.method == "joint") {
        auto wp = make_weights(raw.size(), w);
        check(ggm_oracle_solve(GGM_ORACLE_JOINT, raw.data(), raw.size(), wp.get(), 0.0, 0.0,
                               budget, &est),
              "oracle");
    } else if (a.method == "ggl") {
        check(ggm_oracle_solve(GGM_ORACLE_GGL, raw.data(), raw.size(), nullptr, w.at("rho"),
                               w.at("lambda2"), budget, &est),
              "oracle");
    } else {
        throw Failure("--method: the oracle handles joint or ggl", 2);
    }
    EstimatePtr hold(est);
    write_estimate(est, a.out, describe(a, "oracle"));
    std::printf("objective %.10g after %zu steps\n", ggm_estimate_objective(est),
                ggm_estimate_iterations(est));
}

void cmd_run(const std::string& id, const std::string& config, const std::string& out,
             const std::vector<std::string>& extras) {
    ggm_experiment* raw = nullptr;
    check(ggm_experiment_create(id.c_str(), &raw), "experiment");
    ExperimentPtr x(raw);
    if (!config.empty())
        check(ggm_experiment_load_config(raw, config.c_str()), "config " + config);
    if (extras.size() % 2 != 0)
        throw Failure("expected --key value pairs, got a dangling '" + extras.back() + "'", 2);
    for (std::size_t i = 0; i < extras.size(); i += 2) {
        std::string key = extras[i];
        if (key.rfind("--", 0) != 0)
            throw Failure("expected --key, got '" + key + "'", 2);
        key = key.substr(2);
        check(ggm_experiment_set(raw, key.c_str(), extras[i + 1].c_str()), "--" + key);
    }
    ggm_table* table = nullptr;
    check(ggm_experiment_run(raw, &table), "run " + id);
    TablePtr hold(table);
    check(ggm_table_write_csv(table, out.c_str()), "writing " + out);

    std::string manifest = out;
    if (manifest.size() >= 4 && manifest.compare(manifest.size() - 4, 4, ".csv") == 0)
        manifest.resize(manifest.size() - 4);
    manifest += ".manifest.txt";
    check(ggm_table_write_manifest(table, manifest.c_str()), "writing " + manifest);
    std::cout << "wrote " << out << " (" << ggm_table_rows(table) << " rows, "
              << ggm_table_solver_invocations(table) << " solver invocations) and "
              << manifest << "\n";
}

void add_solver_flags(CLI::App* cmd, SolveArgs& a) {
    cmd->add_option("--covs", a.covs, "Observed covariance CSV files, one per layer")
        ->required()
        ->expected(1, -1);
    cmd->add_option("--weights", a.weights,
                    "Comma list of rho, beta, rho_pair, beta_pair, lambda2 (key=value)")
        ->required();
    cmd->add_option("--out", a.out, "Output directory")->required();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint learning of Gaussian graphical models with hidden nodes"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ggm_version()));

    std::string run_id, run_config, run_out;
    auto* run = app.add_subcommand("run", "Run a benchmark experiment and write its CSV");
    run->add_option("experiment", run_id, "tc1, tc2 or tc3")->required();
    run->add_option("--config", run_config, "key=value config file");
    run->add_option("--out", run_out, "Output CSV path")->required();
    run->allow_extras();

    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "Estimate precision matrices from covariances");
    add_solver_flags(solve, solve_args);
    solve->add_option("--method", solve_args.method, "joint, ggl, lvgl or gl")
        ->capture_default_str();
    solve->add_option("--max-iters", solve_args.max_iters)->capture_default_str();
    solve->add_option("--tol", solve_args.tol, "Relative primal and dual tolerance")
        ->capture_default_str();
    solve->add_option("--admissible-set", solve_args.admissible)->capture_default_str();
    solve->add_flag("--penalize-diagonal", solve_args.penalize_diagonal);

    SolveArgs oracle_args;
    std::size_t budget = 200000;
    auto* oracle = app.add_subcommand("oracle", "Reference subgradient solver (O <= 5, K <= 3)");
    add_solver_flags(oracle, oracle_args);
    oracle->add_option("--method", oracle_args.method, "joint or ggl")->capture_default_str();
    oracle->add_option("--budget", budget, "Subgradient steps")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*run)
            cmd_run(run_id, run_config, run_out, run->remaining());
        else if (*solve)
            cmd_solve(solve_args);
        else if (*oracle)
            cmd_oracle(oracle_args, budget);
    } catch (const Failure& e) {
        std::cerr << "ggm: " << e.what() << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "ggm: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
