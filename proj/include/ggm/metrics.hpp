#pragma once

#include "ggm/linalg.hpp"

#include <vector>

namespace ggm {

/// (1/K) sum_k || est_k/||est_k||_F - truth_k/||truth_k||_F ||_F^2.
/// Throws DegenerateInput when any matrix has zero Frobenius norm.
double mean_normalized_error(const std::vector<SymMatrix>& est,
                             const std::vector<SymMatrix>& truth);

double normalized_error(const SymMatrix& est, const SymMatrix& truth);

/// F1 score of off-diagonal support recovery. An entry is an edge when
/// |value| > threshold * (largest off-diagonal |value| of that matrix).
/// No predicted edges scores 0.
double support_f1(const SymMatrix& est, const SymMatrix& truth, double threshold = 0.1);

struct EvalReport {
    double mean_error = 0.0;
    std::vector<double> per_layer_error;
    std::vector<double> support_f1;
    double runtime_seconds = 0.0;
};

EvalReport evaluate(const std::vector<SymMatrix>& est, const std::vector<SymMatrix>& truth,
                    double runtime_seconds = 0.0, double f1_threshold = 0.1);

}  // namespace ggm
