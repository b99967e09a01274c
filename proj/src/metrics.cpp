#include "ggm/metrics.hpp"

#include "ggm/error.hpp"

#include <algorithm>
#include <cmath>

namespace ggm {

double normalized_error(const SymMatrix& est, const SymMatrix& truth) {
    if (est.dim() != truth.dim())
        throw_invalid("normalized_error: dimension mismatch");
    const double ee = est.mat().cwiseProduct(est.mat()).sum();
    const double tt = truth.mat().cwiseProduct(truth.mat()).sum();
    if (ee == 0.0 || tt == 0.0)
        throw Error(ErrorKind::DegenerateInput,
                    "normalized_error: matrix with zero Frobenius norm");
    // ||a/|a| - b/|b|||^2 expanded; orthogonal inputs give exactly 2.
    const double et = est.mat().cwiseProduct(truth.mat()).sum();
    const double cosine = et / (std::sqrt(ee) * std::sqrt(tt));
    return std::clamp(2.0 - 2.0 * cosine, 0.0, 4.0);
}

double mean_normalized_error(const std::vector<SymMatrix>& est,
                             const std::vector<SymMatrix>& truth) {
    if (est.size() != truth.size() || est.empty())
        throw_invalid("mean_normalized_error: need equally many (>= 1) matrices");
    double sum = 0.0;
    for (std::size_t k = 0; k < est.size(); ++k)
        sum += normalized_error(est[k], truth[k]);
    return sum / static_cast<double>(est.size());
}

namespace {

double max_offdiag_abs(const SymMatrix& m) {
    double best = 0.0;
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = i + 1; j < m.dim(); ++j)
            best = std::max(best, std::abs(m(i, j)));
    return best;
}

}  // namespace

double support_f1(const SymMatrix& est, const SymMatrix& truth, double threshold) {
    if (est.dim() != truth.dim())
        throw_invalid("support_f1: dimension mismatch");
    if (!(threshold >= 0.0))
        throw_invalid("support_f1: threshold must be nonnegative");
    const double ce = threshold * max_offdiag_abs(est);
    const double ct = threshold * max_offdiag_abs(truth);
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < est.dim(); ++i)
        for (std::size_t j = i + 1; j < est.dim(); ++j) {
            const bool pe = std::abs(est(i, j)) > ce;
            const bool pt = std::abs(truth(i, j)) > ct;
            tp += pe && pt;
            fp += pe && !pt;
            fn += !pe && pt;
        }
    if (tp + fp == 0)
        return 0.0;
    return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

EvalReport evaluate(const std::vector<SymMatrix>& est, const std::vector<SymMatrix>& truth,
                    double runtime_seconds, double f1_threshold) {
    EvalReport rep;
    rep.runtime_seconds = runtime_seconds;
    double sum = 0.0;
    if (est.size() != truth.size() || est.empty())
        throw_invalid("evaluate: need equally many (>= 1) matrices");
    for (std::size_t k = 0; k < est.size(); ++k) {
        rep.per_layer_error.push_back(normalized_error(est[k], truth[k]));
        rep.support_f1.push_back(support_f1(est[k], truth[k], f1_threshold));
        sum += rep.per_layer_error.back();
    }
    rep.mean_error = sum / static_cast<double>(est.size());
    return rep;
}

}  // namespace ggm
