#include "ggm/ggm.h"

#include "ggm/error.hpp"
#include "ggm/experiments.hpp"
#include "ggm/io.hpp"
#include "ggm/metrics.hpp"
#include "ggm/oracle.hpp"
#include "ggm/solvers.hpp"

#include <memory>
#include <new>
#include <string>
#include <vector>

struct ggm_matrix {
    ggm::SymMatrix m;
};

struct ggm_weights {
    ggm::PenaltyWeights w;
};

struct ggm_estimate {
    std::vector<ggm_matrix> s;
    std::vector<ggm_matrix> p;
    double objective = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

struct ggm_experiment {
    ggm::ExperimentConfig cfg;
    std::string dump;
};

struct ggm_table {
    ggm::ResultTable table;
    ggm::ExperimentConfig cfg;
};

namespace {

thread_local std::string g_last_error;

ggm_status status_for(ggm::ErrorKind k) {
    switch (k) {
    case ggm::ErrorKind::InvalidInput: return GGM_ERR_INVALID_INPUT;
    case ggm::ErrorKind::NumericalError: return GGM_ERR_NUMERICAL;
    case ggm::ErrorKind::ParseError: return GGM_ERR_PARSE;
    case ggm::ErrorKind::DegenerateInput: return GGM_ERR_DEGENERATE;
    case ggm::ErrorKind::ConfigError: return GGM_ERR_CONFIG;
    case ggm::ErrorKind::IoError: return GGM_ERR_IO;
    }
    return GGM_ERR_INTERNAL;
}

template <class Fn>
ggm_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return GGM_OK;
    } catch (const ggm::Error& e) {
        g_last_error = e.what();
        return status_for(e.kind());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return GGM_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return GGM_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return GGM_ERR_INTERNAL;
    }
}

void require(bool cond, const char* what) {
    if (!cond)
        ggm::throw_invalid(what);
}

ggm::SolverConfig to_config(const ggm_solver_options* opts) {
    ggm_solver_options o;
    ggm_solver_options_default(&o);
    if (opts)
        o = *opts;
    ggm::SolverConfig c;
    c.step = o.step;
    c.max_iters = o.max_iters;
    c.tol_primal = o.tol_primal;
    c.tol_dual = o.tol_dual;
    c.pd_floor = o.pd_floor;
    c.adaptive_step = o.adaptive_step != 0;
    c.scope.penalize_diagonal = o.penalize_diagonal != 0;
    c.scope.fuse_latent_diagonal = o.fuse_latent_diagonal != 0;
    switch (o.admissible_set) {
    case GGM_ADMISSIBLE_SYMMETRIC: c.admissible_set = ggm::AdmissibleSet::Symmetric; break;
    case GGM_ADMISSIBLE_NONPOSITIVE_OFFDIAG:
        c.admissible_set = ggm::AdmissibleSet::NonpositiveOffdiag;
        break;
    default: ggm::throw_invalid("unknown admissible set");
    }
    c.record_history = false;
    c.validate();
    return c;
}

ggm::ObservedCovariances gather(const ggm_matrix* const* covs, std::size_t count) {
    require(covs != nullptr && count > 0, "at least one covariance is required");
    ggm::ObservedCovariances oc;
    for (std::size_t k = 0; k < count; ++k) {
        require(covs[k] != nullptr, "null covariance handle");
        oc.covs.push_back(covs[k]->m);
    }
    oc.validate();
    return oc;
}

ggm_estimate* wrap(std::vector<ggm::SymMatrix> s, std::vector<ggm::SymMatrix> p,
                   double objective, std::size_t iterations, bool converged) {
    auto e = std::make_unique<ggm_estimate>();
    for (auto& m : s)
        e->s.push_back({std::move(m)});
    for (auto& m : p)
        e->p.push_back({std::move(m)});
    e->objective = objective;
    e->iterations = iterations;
    e->converged = converged;
    return e.release();
}

ggm_estimate* wrap(ggm::JointEstimate r) {
    return wrap(std::move(r.s_hat), std::move(r.p_hat), r.objective, r.iterations,
                r.converged);
}

}  // namespace

extern "C" {

const char* ggm_version(void) { return "1.0.0"; }

const char* ggm_status_name(ggm_status status) {
    switch (status) {
    case GGM_OK: return "ok";
    case GGM_ERR_INVALID_INPUT: return "invalid input";
    case GGM_ERR_NUMERICAL: return "numerical error";
    case GGM_ERR_PARSE: return "parse error";
    case GGM_ERR_DEGENERATE: return "degenerate input";
    case GGM_ERR_CONFIG: return "config error";
    case GGM_ERR_IO: return "io error";
    case GGM_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* ggm_last_error(void) { return g_last_error.c_str(); }

ggm_status ggm_matrix_create(size_t dim, const double* row_major, ggm_matrix** out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        require(dim == 0 || row_major != nullptr, "null matrix data");
        ggm::Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                m(i, j) = row_major[i * dim + j];
        *out = new ggm_matrix{ggm::SymMatrix(m)};
    });
}

ggm_status ggm_matrix_read_csv(const char* path, ggm_matrix** out) {
    return guarded([&] {
        require(path != nullptr && out != nullptr, "null argument");
        *out = new ggm_matrix{ggm::read_matrix_csv(path)};
    });
}

ggm_status ggm_matrix_write_csv(const ggm_matrix* m, const char* path) {
    return guarded([&] {
        require(m != nullptr && path != nullptr, "null argument");
        ggm::write_matrix_csv(m->m, path);
    });
}

size_t ggm_matrix_dim(const ggm_matrix* m) { return m ? m->m.dim() : 0; }

ggm_status ggm_matrix_copy(const ggm_matrix* m, double* out, size_t len) {
    return guarded([&] {
        require(m != nullptr && out != nullptr, "null argument");
        const std::size_t n = m->m.dim();
        require(len >= n * n, "output buffer too small");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out[i * n + j] = m->m(i, j);
    });
}

void ggm_matrix_free(ggm_matrix* m) { delete m; }

void ggm_solver_options_default(ggm_solver_options* opts) {
    if (!opts)
        return;
    const ggm::SolverConfig c;
    opts->step = c.step;
    opts->max_iters = c.max_iters;
    opts->tol_primal = c.tol_primal;
    opts->tol_dual = c.tol_dual;
    opts->pd_floor = c.pd_floor;
    opts->adaptive_step = c.adaptive_step ? 1 : 0;
    opts->penalize_diagonal = c.scope.penalize_diagonal ? 1 : 0;
    opts->fuse_latent_diagonal = c.scope.fuse_latent_diagonal ? 1 : 0;
    opts->admissible_set = GGM_ADMISSIBLE_SYMMETRIC;
}

ggm_status ggm_weights_create(size_t layers, ggm_weights** out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        require(layers > 0, "at least one layer is required");
        *out = new ggm_weights{ggm::PenaltyWeights::uniform(layers, 0.0, 0.0, 0.0, 0.0)};
    });
}

ggm_status ggm_weights_set_layer(ggm_weights* w, size_t k, double rho, double beta) {
    return guarded([&] {
        require(w != nullptr, "null weights handle");
        require(k < w->w.layers(), "layer index out of range");
        require(rho >= 0.0 && beta >= 0.0, "weights must be nonnegative");
        w->w.rho[k] = rho;
        w->w.beta[k] = beta;
    });
}

ggm_status ggm_weights_set_pair(ggm_weights* w, size_t k1, size_t k2, double rho_pair,
                                double beta_pair) {
    return guarded([&] {
        require(w != nullptr, "null weights handle");
        require(k1 != k2 && k1 < w->w.layers() && k2 < w->w.layers(),
                "pair indices out of range");
        require(rho_pair >= 0.0 && beta_pair >= 0.0, "weights must be nonnegative");
        w->w.rho_pair.set(std::min(k1, k2), std::max(k1, k2), rho_pair);
        w->w.beta_pair.set(std::min(k1, k2), std::max(k1, k2), beta_pair);
    });
}

ggm_status ggm_weights_set_uniform(ggm_weights* w, double rho, double beta, double rho_pair,
                                   double beta_pair) {
    return guarded([&] {
        require(w != nullptr, "null weights handle");
        w->w = ggm::PenaltyWeights::uniform(w->w.layers(), rho, beta, rho_pair, beta_pair);
    });
}

void ggm_weights_free(ggm_weights* w) { delete w; }

ggm_status ggm_solve_joint(const ggm_matrix* const* covs, size_t count, const ggm_weights* w,
                           const ggm_solver_options* opts, ggm_estimate** out) {
    return guarded([&] {
        require(w != nullptr && out != nullptr, "null argument");
        *out = wrap(ggm::solve_joint_hidden(gather(covs, count), w->w, to_config(opts)));
    });
}

ggm_status ggm_solve_lvgl(const ggm_matrix* cov, double rho, double beta,
                          const ggm_solver_options* opts, ggm_estimate** out) {
    return guarded([&] {
        require(cov != nullptr && out != nullptr, "null argument");
        *out = wrap(ggm::solve_lvgl(cov->m, rho, beta, to_config(opts)));
    });
}

ggm_status ggm_solve_gl(const ggm_matrix* cov, double lambda, const ggm_solver_options* opts,
                        ggm_estimate** out) {
    return guarded([&] {
        require(cov != nullptr && out != nullptr, "null argument");
        *out = wrap(ggm::solve_gl(cov->m, lambda, to_config(opts)));
    });
}

ggm_status ggm_solve_ggl(const ggm_matrix* const* covs, size_t count, double lambda1,
                         double lambda2, const ggm_solver_options* opts, ggm_estimate** out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        *out = wrap(ggm::solve_ggl(gather(covs, count), lambda1, lambda2, to_config(opts)));
    });
}

ggm_status ggm_oracle_solve(ggm_oracle_kind kind, const ggm_matrix* const* covs, size_t count,
                            const ggm_weights* w, double lambda1, double lambda2,
                            size_t budget, ggm_estimate** out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        ggm::OracleProblem prob;
        prob.covs = gather(covs, count);
        if (kind == GGM_ORACLE_JOINT) {
            require(w != nullptr, "joint oracle needs weights");
            prob.kind = ggm::OracleKind::Joint;
            prob.weights = w->w;
        } else if (kind == GGM_ORACLE_GGL) {
            prob.kind = ggm::OracleKind::Ggl;
            prob.lambda1 = lambda1;
            prob.lambda2 = lambda2;
        } else {
            ggm::throw_invalid("unknown oracle kind");
        }
        ggm::OracleOptions opt;
        if (budget > 0)
            opt.budget = budget;
        auto r = ggm::reference_oracle(prob, opt);
        *out = wrap(std::move(r.s), std::move(r.p), r.objective, r.steps, true);
    });
}

size_t ggm_estimate_layers(const ggm_estimate* e) { return e ? e->s.size() : 0; }

const ggm_matrix* ggm_estimate_s(const ggm_estimate* e, size_t k) {
    return e && k < e->s.size() ? &e->s[k] : nullptr;
}

const ggm_matrix* ggm_estimate_p(const ggm_estimate* e, size_t k) {
    return e && k < e->p.size() ? &e->p[k] : nullptr;
}

double ggm_estimate_objective(const ggm_estimate* e) { return e ? e->objective : 0.0; }
size_t ggm_estimate_iterations(const ggm_estimate* e) { return e ? e->iterations : 0; }
int ggm_estimate_converged(const ggm_estimate* e) { return e && e->converged ? 1 : 0; }
void ggm_estimate_free(ggm_estimate* e) { delete e; }

ggm_status ggm_mean_normalized_error(const ggm_matrix* const* est,
                                     const ggm_matrix* const* truth, size_t count,
                                     double* out) {
    return guarded([&] {
        require(est != nullptr && truth != nullptr && out != nullptr, "null argument");
        std::vector<ggm::SymMatrix> a, b;
        for (std::size_t k = 0; k < count; ++k) {
            require(est[k] != nullptr && truth[k] != nullptr, "null matrix handle");
            a.push_back(est[k]->m);
            b.push_back(truth[k]->m);
        }
        *out = ggm::mean_normalized_error(a, b);
    });
}

ggm_status ggm_experiment_create(const char* id, ggm_experiment** out) {
    return guarded([&] {
        require(id != nullptr && out != nullptr, "null argument");
        auto x = std::make_unique<ggm_experiment>();
        x->cfg = ggm::ExperimentConfig::defaults(ggm::parse_experiment_id(id));
        *out = x.release();
    });
}

ggm_status ggm_experiment_load_config(ggm_experiment* x, const char* path) {
    return guarded([&] {
        require(x != nullptr && path != nullptr, "null argument");
        x->cfg.load_file(path);
    });
}

ggm_status ggm_experiment_set(ggm_experiment* x, const char* key, const char* value) {
    return guarded([&] {
        require(x != nullptr && key != nullptr && value != nullptr, "null argument");
        x->cfg.set(key, value);
    });
}

const char* ggm_experiment_dump(ggm_experiment* x) {
    if (!x)
        return "";
    x->dump = x->cfg.dump();
    return x->dump.c_str();
}

ggm_status ggm_experiment_run(const ggm_experiment* x, ggm_table** out) {
    return guarded([&] {
        require(x != nullptr && out != nullptr, "null argument");
        x->cfg.validate();
        auto t = std::make_unique<ggm_table>();
        t->table = ggm::run_experiment(x->cfg);
        t->cfg = x->cfg;
        *out = t.release();
    });
}

void ggm_experiment_free(ggm_experiment* x) { delete x; }

size_t ggm_table_rows(const ggm_table* t) { return t ? t->table.rows.size() : 0; }

double ggm_table_xaxis(const ggm_table* t, size_t row) {
    return t && row < t->table.rows.size() ? t->table.rows[row].xaxis : 0.0;
}

double ggm_table_mean(const ggm_table* t, size_t row, int method) {
    if (!t || row >= t->table.rows.size() || method < 0 || method > 3)
        return 0.0;
    return t->table.rows[row].mean[static_cast<std::size_t>(method)];
}

double ggm_table_median(const ggm_table* t, size_t row, int method) {
    if (!t || row >= t->table.rows.size() || method < 0 || method > 3)
        return 0.0;
    return t->table.rows[row].median(static_cast<ggm::Method>(method));
}

size_t ggm_table_solver_invocations(const ggm_table* t) {
    return t ? t->table.solver_invocations : 0;
}

ggm_status ggm_table_write_csv(const ggm_table* t, const char* path) {
    return guarded([&] {
        require(t != nullptr && path != nullptr, "null argument");
        ggm::emit_csv(t->table, path);
    });
}

ggm_status ggm_table_write_manifest(const ggm_table* t, const char* path) {
    return guarded([&] {
        require(t != nullptr && path != nullptr, "null argument");
        ggm::write_text_file(path, ggm::format_manifest(t->table, t->cfg));
    });
}

void ggm_table_free(ggm_table* t) { delete t; }

}  // extern "C"
