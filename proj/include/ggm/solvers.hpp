#pragma once

#include "ggm/linalg.hpp"
#include "ggm/prox.hpp"
#include "ggm/sampling.hpp"

#include <utility>
#include <vector>

namespace ggm {

enum class AdmissibleSet {
    Symmetric,
    /// Off-diagonal entries of S constrained to be <= 0 (M-matrix models).
    NonpositiveOffdiag,
};

/// Which entries the l1-type penalties touch. Shared by the solvers and the
/// objective evaluators so both always agree.
struct PenaltyScope {
    /// l1 and fusion on the diagonal of S.
    bool penalize_diagonal = false;
    /// Fusion on the diagonal of P.
    bool fuse_latent_diagonal = true;
};

struct SolverConfig {
    /// ADMM penalty parameter (initial value when adaptive_step is set).
    double step = 1.0;
    std::size_t max_iters = 2000;
    double tol_primal = 1e-5;
    double tol_dual = 1e-5;
    AdmissibleSet admissible_set = AdmissibleSet::Symmetric;
    double pd_floor = 1e-8;
    PenaltyScope scope;
    /// Residual balancing: step doubles/halves when one relative residual
    /// exceeds the other by 10x.
    bool adaptive_step = true;
    bool record_history = true;

    void validate() const;
};

struct PenaltyWeights {
    std::vector<double> rho;   // l1 on S, per layer
    std::vector<double> beta;  // trace (nuclear) on P, per layer
    PairWeights rho_pair;      // fusion of S across layers
    PairWeights beta_pair;     // fusion of P across layers

    static PenaltyWeights uniform(std::size_t k, double rho, double beta, double rho_pair,
                                  double beta_pair);

    std::size_t layers() const { return rho.size(); }
    void validate() const;
};

struct JointEstimate {
    std::vector<SymMatrix> s_hat;
    std::vector<SymMatrix> p_hat;
    double objective = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    /// Relative (primal, dual) residual per iteration.
    std::vector<std::pair<double, double>> residual_history;
};

/// Full convex objective; +inf when some S^(k) - P^(k) is not PD.
double joint_objective(const std::vector<SymMatrix>& s, const std::vector<SymMatrix>& p,
                       const ObservedCovariances& covs, const PenaltyWeights& w,
                       const PenaltyScope& scope = {});

/// sum_k [tr(S C) - logdet S + lambda1 ||S||_1] + lambda2 sum_{i != j} ||S_ij^(.)||_2.
double ggl_objective(const std::vector<SymMatrix>& s, const ObservedCovariances& covs,
                     double lambda1, double lambda2, const PenaltyScope& scope = {});

JointEstimate solve_joint_hidden(const ObservedCovariances& covs, const PenaltyWeights& w,
                                 const SolverConfig& cfg);

/// Graphical lasso; the estimate is s_hat[0].
JointEstimate solve_gl(const SymMatrix& cov, double lambda, const SolverConfig& cfg);

/// Group graphical lasso: elementwise l1 plus a cross-layer l2 group penalty
/// on each off-diagonal entry.
JointEstimate solve_ggl(const ObservedCovariances& covs, double lambda1, double lambda2,
                        const SolverConfig& cfg);

/// Latent-variable graphical lasso on a single layer.
JointEstimate solve_lvgl(const SymMatrix& cov, double rho, double beta,
                         const SolverConfig& cfg);

}  // namespace ggm
