#include "ggm/experiments.hpp"

#include "ggm/error.hpp"
#include "ggm/io.hpp"
#include "ggm/metrics.hpp"
#include "ggm/rng.hpp"
#include "ggm/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

namespace ggm {

double ResultRow::median(Method m) const {
    std::vector<double> v = errors[m];
    if (v.empty())
        return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

namespace {

// Seed streams inside one realization.
enum Stream : std::uint64_t {
    kGraphStream = 1,
    kFamilyStream = 2,
    kPrecisionStream = 3,
    kHiddenStream = 4,
    kSampleStream = 5,
};

// Tuning realizations draw from a disjoint index range.
constexpr std::uint64_t kTuningOffset = 1ULL << 40;

struct Realization {
    ObservedCovariances covs;
    std::vector<SymMatrix> truth;  // S_O per layer
    MultiLayerFamily family;
};

using Builder = std::function<Realization(std::size_t sweep_index, std::uint64_t seed)>;

Realization finish_realization(const ExperimentConfig& cfg, const std::vector<Graph>& graphs,
                               std::size_t n_hidden, std::size_t m, std::uint64_t seed) {
    Realization r;
    const std::size_t n = graphs.front().n_nodes();
    r.family.partition = choose_hidden(n, n_hidden, derive_seed(seed, kHiddenStream));
    for (const Graph& g : graphs)
        r.family.layers.push_back(to_precision(g, cfg.precision, derive_seed(seed, kPrecisionStream)));
    for (std::size_t a = 0; a < graphs.size(); ++a)
        for (std::size_t b = a + 1; b < graphs.size(); ++b)
            r.family.pair_support_difference.push_back(support_difference(graphs[a], graphs[b]));
    for (std::size_t k = 0; k < graphs.size(); ++k) {
        const SymMatrix& s = r.family.layers[k].precision;
        const SignalMatrix x = sample_gmrf(s, m, derive_seed(seed, kSampleStream, k));
        r.covs.covs.push_back(observed_sample_cov(x, r.family.partition));
        r.covs.sample_counts.push_back(m);
        r.truth.push_back(principal_submatrix(s, r.family.partition.observed));
    }
    return r;
}

std::size_t rewire_count(const ExperimentConfig& cfg, const Graph& base) {
    if (cfg.n_rewire)
        return std::min(*cfg.n_rewire, base.edge_count());
    return (base.edge_count() + 9) / 10;
}

double run_method(Method method, const Realization& r, const Hyperparameters& h,
                  const SolverConfig& solver) {
    const std::size_t k = r.covs.layers();
    std::vector<SymMatrix> est;
    switch (method) {
    case kGL:
        for (std::size_t a = 0; a < k; ++a)
            est.push_back(solve_gl(r.covs.covs[a], h.rho, solver).s_hat.front());
        break;
    case kGGL:
        est = solve_ggl(r.covs, h.rho, h.second, solver).s_hat;
        break;
    case kLVGL:
        for (std::size_t a = 0; a < k; ++a)
            est.push_back(solve_lvgl(r.covs.covs[a], h.rho, h.beta, solver).s_hat.front());
        break;
    case kJoint: {
        const auto w = PenaltyWeights::uniform(k, h.rho, h.beta, h.rho * h.second,
                                               h.beta * h.second);
        est = solve_joint_hidden(r.covs, w, solver).s_hat;
        break;
    }
    }
    return mean_normalized_error(est, r.truth);
}

std::vector<Hyperparameters> grid_for(Method m, const ExperimentConfig& cfg) {
    std::vector<Hyperparameters> g;
    switch (m) {
    case kGL:
        for (double rho : cfg.rho_grid)
            g.push_back({rho, 0.0, 0.0});
        break;
    case kGGL:
        for (double rho : cfg.rho_grid)
            for (double l2 : cfg.lambda2_grid)
                g.push_back({rho, 0.0, l2});
        break;
    case kLVGL:
        for (double rho : cfg.rho_grid)
            for (double beta : cfg.beta_grid)
                g.push_back({rho, beta, 0.0});
        break;
    case kJoint:
        for (double rho : cfg.rho_grid)
            for (double beta : cfg.beta_grid)
                for (double eta : cfg.eta_grid)
                    g.push_back({rho, beta, eta});
        break;
    }
    return g;
}

ResultTable run_sweep(const ExperimentConfig& cfg, const std::vector<double>& xaxis,
                      const Builder& build) {
    ResultTable table;
    table.id = cfg.id;
    table.n_realizations = cfg.n_realizations;
    for (std::size_t s = 0; s < xaxis.size(); ++s) {
        ResultRow row;
        row.xaxis = xaxis[s];

        // Hyperparameter selection on held-out realizations.
        std::vector<Realization> tuning(cfg.tuning_realizations);
        parallel_for(tuning.size(), cfg.workers, [&](std::size_t t) {
            tuning[t] = build(s, derive_seed(cfg.base_seed, s, kTuningOffset + t));
        });
        for (std::size_t mi = 0; mi < 4; ++mi) {
            const auto method = static_cast<Method>(mi);
            const auto grid = grid_for(method, cfg);
            std::vector<double> score(grid.size() * tuning.size());
            parallel_for(score.size(), cfg.workers, [&](std::size_t i) {
                score[i] = run_method(method, tuning[i % tuning.size()],
                                      grid[i / tuning.size()], cfg.solver);
            });
            table.tuning_invocations += score.size();
            std::size_t best = 0;
            double best_score = std::numeric_limits<double>::infinity();
            for (std::size_t g = 0; g < grid.size(); ++g) {
                double sum = 0.0;
                for (std::size_t t = 0; t < tuning.size(); ++t)
                    sum += score[g * tuning.size() + t];
                if (sum < best_score) {
                    best_score = sum;
                    best = g;
                }
            }
            row.selected[mi] = grid[best];
        }

        // Matched evaluation: every method sees the same realization.
        const std::size_t nr = cfg.n_realizations;
        std::vector<double> err(4 * nr);
        std::vector<std::size_t> first_diff;
        parallel_for(nr, cfg.workers, [&](std::size_t r) {
            const Realization data = build(s, derive_seed(cfg.base_seed, s, r));
            for (std::size_t mi = 0; mi < 4; ++mi)
                err[r * 4 + mi] =
                    run_method(static_cast<Method>(mi), data, row.selected[mi], cfg.solver);
            if (r == 0)
                first_diff = data.family.pair_support_difference;
        });
        table.solver_invocations += 4 * nr;
        for (std::size_t mi = 0; mi < 4; ++mi) {
            double sum = 0.0;
            for (std::size_t r = 0; r < nr; ++r) {
                row.errors[mi].push_back(err[r * 4 + mi]);
                sum += err[r * 4 + mi];
            }
            row.mean[mi] = sum / static_cast<double>(nr);
        }
        table.pair_support_difference.push_back(std::move(first_diff));
        table.rows.push_back(std::move(row));
    }
    return table;
}

template <class T>
std::vector<double> as_axis(const std::vector<T>& v) {
    return {v.begin(), v.end()};
}

}  // namespace

ResultTable run_test_case_1(const ExperimentConfig& cfg) {
    if (cfg.id != ExperimentId::Tc1)
        throw Error(ErrorKind::ConfigError, "run_test_case_1 needs experiment=tc1");
    cfg.validate();
    return run_sweep(cfg, as_axis(cfg.k_sweep), [&](std::size_t s, std::uint64_t seed) {
        const Graph base = gen_erdos_renyi(cfg.n, cfg.p, derive_seed(seed, kGraphStream));
        const auto graphs = gen_rewired_family(base, cfg.k_sweep[s], rewire_count(cfg, base),
                                               derive_seed(seed, kFamilyStream));
        return finish_realization(cfg, graphs, cfg.n_hidden, cfg.m, seed);
    });
}

ResultTable run_test_case_2(const ExperimentConfig& cfg) {
    if (cfg.id != ExperimentId::Tc2)
        throw Error(ErrorKind::ConfigError, "run_test_case_2 needs experiment=tc2");
    cfg.validate();
    return run_sweep(cfg, as_axis(cfg.m_sweep), [&](std::size_t s, std::uint64_t seed) {
        const Graph base =
            gen_small_world(cfg.n, cfg.neighbors, cfg.rewire_p, derive_seed(seed, kGraphStream));
        const auto graphs = gen_rewired_family(base, cfg.k, rewire_count(cfg, base),
                                               derive_seed(seed, kFamilyStream));
        return finish_realization(cfg, graphs, cfg.n_hidden, cfg.m_sweep[s], seed);
    });
}

ResultTable run_test_case_3(const ExperimentConfig& cfg) {
    if (cfg.id != ExperimentId::Tc3)
        throw Error(ErrorKind::ConfigError, "run_test_case_3 needs experiment=tc3");
    cfg.validate();
    std::vector<Graph> graphs;
    if (!cfg.layers.empty()) {
        graphs = load_multilayer(cfg.layers, cfg.binarize);
    } else {
        // Fixed synthetic stand-in: one ER base plus rewired variants.
        const std::uint64_t seed = derive_seed(cfg.base_seed, 0x7c3, 0);
        const Graph base =
            gen_erdos_renyi(cfg.substitute_n, cfg.substitute_p, derive_seed(seed, kGraphStream));
        graphs = gen_rewired_family(base, cfg.k, rewire_count(cfg, base),
                                    derive_seed(seed, kFamilyStream));
    }
    const std::size_t n = graphs.front().n_nodes();
    for (auto o : cfg.o_sweep)
        if (o > n)
            throw Error(ErrorKind::ConfigError, "o_sweep value " + std::to_string(o) +
                                                    " exceeds the " + std::to_string(n) +
                                                    " available nodes");
    return run_sweep(cfg, as_axis(cfg.o_sweep), [&](std::size_t s, std::uint64_t seed) {
        return finish_realization(cfg, graphs, n - cfg.o_sweep[s], cfg.m, seed);
    });
}

ResultTable run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.id) {
    case ExperimentId::Tc1: return run_test_case_1(cfg);
    case ExperimentId::Tc2: return run_test_case_2(cfg);
    case ExperimentId::Tc3: return run_test_case_3(cfg);
    }
    throw Error(ErrorKind::ConfigError, "unknown experiment");
}

namespace {

std::string g6(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

}  // namespace

std::string format_csv(const ResultTable& table) {
    if (table.rows.empty())
        throw_invalid("format_csv: empty result table");
    std::string out = "xaxis,GL,GGL,LVGL,Joint\n";
    for (const auto& row : table.rows) {
        out += g6(row.xaxis);
        for (std::size_t m = 0; m < 4; ++m)
            out += ',' + g6(row.mean[m]);
        out += '\n';
    }
    return out;
}

void emit_csv(const ResultTable& table, const std::string& path) {
    write_text_file(path, format_csv(table));
}

std::string manifest_path_for(const std::string& csv_path) {
    std::string base = csv_path;
    if (base.size() >= 4 && base.substr(base.size() - 4) == ".csv")
        base.resize(base.size() - 4);
    return base + ".manifest.txt";
}

std::string format_manifest(const ResultTable& table, const ExperimentConfig& cfg) {
    std::ostringstream o;
    o << "# run manifest\n[config]\n" << cfg.dump();
    o << "[accounting]\n"
      << "sweep_values=" << table.rows.size() << '\n'
      << "n_realizations=" << table.n_realizations << '\n'
      << "solver_invocations=" << table.solver_invocations << '\n'
      << "expected_solver_invocations=" << 4 * table.rows.size() * table.n_realizations << '\n'
      << "tuning_invocations=" << table.tuning_invocations << '\n';
    o << "[selected_hyperparameters]\n";
    for (const auto& row : table.rows) {
        const auto& h = row.selected;
        o << "xaxis=" << g6(row.xaxis) << " GL(lambda=" << g6(h[kGL].rho) << ")"
          << " GGL(lambda1=" << g6(h[kGGL].rho) << ",lambda2=" << g6(h[kGGL].second) << ")"
          << " LVGL(rho=" << g6(h[kLVGL].rho) << ",beta=" << g6(h[kLVGL].beta) << ")"
          << " Joint(rho=" << g6(h[kJoint].rho) << ",beta=" << g6(h[kJoint].beta)
          << ",eta=" << g6(h[kJoint].second) << ")\n";
    }
    o << "[layer_support_difference]\n";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        o << "xaxis=" << g6(table.rows[i].xaxis) << ' ';
        const auto& d = table.pair_support_difference[i];
        for (std::size_t j = 0; j < d.size(); ++j)
            o << (j ? "," : "") << d[j];
        o << '\n';
    }
    o << "[median_error]\nxaxis,GL,GGL,LVGL,Joint\n";
    for (const auto& row : table.rows) {
        o << g6(row.xaxis);
        for (std::size_t m = 0; m < 4; ++m)
            o << ',' << g6(row.median(static_cast<Method>(m)));
        o << '\n';
    }
    return o.str();
}

}  // namespace ggm
