#pragma once

#include "ggm/solvers.hpp"

#include <optional>

namespace ggm {

/// Slow reference solver for tiny instances (O <= 5, K <= 3), used to check
/// the ADMM solvers along an independent route.
enum class OracleKind {
    /// Latent-variable objective (joint_objective); K = 1 is LVGL.
    Joint,
    /// Group graphical lasso objective (ggl_objective); K = 1 is GL.
    Ggl,
};

struct OracleProblem {
    OracleKind kind = OracleKind::Joint;
    ObservedCovariances covs;
    PenaltyWeights weights;  // Joint
    double lambda1 = 0.0;    // Ggl
    double lambda2 = 0.0;    // Ggl
    PenaltyScope scope;
    double pd_floor = 1e-8;
};

struct OracleOptions {
    std::size_t budget = 200000;
    /// The budget is split into stages; each restarts from the best iterate
    /// with half the previous initial step.
    std::size_t stages = 24;
    double initial_step = 0.5;
    /// Default start: S = I, P = eps I.
    std::optional<std::vector<SymMatrix>> start_s;
    std::optional<std::vector<SymMatrix>> start_p;
};

struct OracleResult {
    std::vector<SymMatrix> s;
    std::vector<SymMatrix> p;
    double objective = 0.0;
    std::size_t steps = 0;
};

/// Projected subgradient descent with diminishing normalized steps
/// alpha_t = alpha_stage / sqrt(t + 1). After every step P is projected onto
/// the PSD cone and S is reset to P + proj(S - P) with proj clipping the
/// eigenvalues of S - P at pd_floor, so every iterate is feasible. The best
/// iterate is returned.
OracleResult reference_oracle(const OracleProblem& problem, const OracleOptions& opt = {});

double oracle_objective(const OracleProblem& problem, const std::vector<SymMatrix>& s,
                        const std::vector<SymMatrix>& p);

}  // namespace ggm
