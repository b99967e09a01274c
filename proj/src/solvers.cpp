#include "ggm/solvers.hpp"

#include "ggm/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ggm {

void SolverConfig::validate() const {
    if (!(step > 0.0) || !std::isfinite(step))
        throw_invalid("solver step must be positive");
    if (max_iters < 1)
        throw_invalid("max_iters must be at least 1");
    if (!(tol_primal > 0.0) || !(tol_dual > 0.0))
        throw_invalid("solver tolerances must be positive");
    if (!(pd_floor > 0.0))
        throw_invalid("pd_floor must be positive");
}

PenaltyWeights PenaltyWeights::uniform(std::size_t k, double rho, double beta,
                                       double rho_pair, double beta_pair) {
    PenaltyWeights w{std::vector<double>(k, rho), std::vector<double>(k, beta),
                     PairWeights(k, rho_pair), PairWeights(k, beta_pair)};
    w.validate();
    return w;
}

void PenaltyWeights::validate() const {
    const std::size_t k = rho.size();
    if (k == 0)
        throw_invalid("penalty weights need at least one layer");
    if (beta.size() != k || rho_pair.size() != k || beta_pair.size() != k)
        throw_invalid("penalty weights sized for inconsistent layer counts");
    for (std::size_t i = 0; i < k; ++i)
        if (!(rho[i] >= 0.0) || !(beta[i] >= 0.0) || !std::isfinite(rho[i]) ||
            !std::isfinite(beta[i]))
            throw_invalid("layer penalty weights must be finite and nonnegative");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double offdiag_l1(const Matrix& m, bool diagonal) {
    double s = m.cwiseAbs().sum();
    if (!diagonal)
        s -= m.diagonal().cwiseAbs().sum();
    return s;
}

double nuclear_on_psd(const SymMatrix& p) {
    if (p.empty())
        return 0.0;
    // Trace on feasible iterates; abs-eigenvalue sum for infeasible probes.
    const double lo = min_eigenvalue(p);
    if (lo >= 0.0)
        return p.mat().trace();
    Eigen::SelfAdjointEigenSolver<Matrix> es(p.mat(), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

double likelihood_term(const SymMatrix& r, const SymMatrix& c) {
    bool ok = false;
    const double ld = logdet_pd(r, ok);
    if (!ok)
        return kInf;
    return (r.mat().cwiseProduct(c.mat())).sum() - ld;
}

void check_layers(const std::vector<SymMatrix>& s, const ObservedCovariances& covs) {
    covs.validate();
    if (s.size() != covs.layers())
        throw_invalid("estimate and covariance layer counts differ");
    for (const auto& m : s)
        if (m.dim() != covs.dim())
            throw_invalid("estimate dimension does not match covariances");
}

}  // namespace

double joint_objective(const std::vector<SymMatrix>& s, const std::vector<SymMatrix>& p,
                       const ObservedCovariances& covs, const PenaltyWeights& w,
                       const PenaltyScope& scope) {
    check_layers(s, covs);
    check_layers(p, covs);
    w.validate();
    const std::size_t k = covs.layers();
    if (w.layers() != k)
        throw_invalid("penalty weights sized for a different layer count");
    double total = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        const double lik = likelihood_term(s[a] - p[a], covs.covs[a]);
        if (!std::isfinite(lik))
            return kInf;
        total += lik + w.rho[a] * offdiag_l1(s[a].mat(), scope.penalize_diagonal) +
                 w.beta[a] * nuclear_on_psd(p[a]);
    }
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b) {
            total += w.rho_pair(a, b) *
                     offdiag_l1(s[a].mat() - s[b].mat(), scope.penalize_diagonal);
            total += w.beta_pair(a, b) *
                     offdiag_l1(p[a].mat() - p[b].mat(), scope.fuse_latent_diagonal);
        }
    return total;
}

double ggl_objective(const std::vector<SymMatrix>& s, const ObservedCovariances& covs,
                     double lambda1, double lambda2, const PenaltyScope& scope) {
    check_layers(s, covs);
    const std::size_t k = covs.layers();
    const std::size_t n = covs.dim();
    double total = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        const double lik = likelihood_term(s[a], covs.covs[a]);
        if (!std::isfinite(lik))
            return kInf;
        total += lik + lambda1 * offdiag_l1(s[a].mat(), scope.penalize_diagonal);
    }
    if (lambda2 > 0.0)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j && !scope.penalize_diagonal)
                    continue;
                double sq = 0.0;
                for (std::size_t a = 0; a < k; ++a)
                    sq += s[a](i, j) * s[a](i, j);
                total += lambda2 * std::sqrt(sq);
            }
    return total;
}

namespace {

enum class SPenalty { Fused, Group };

// One problem description for every estimator in the family. The ADMM
// splitting (scaled form) is
//   x = (R, S1, P1, P2),  z = (S, P),  x = (S - P, S, P, P)
// with R handled by prox_logdet, S1 by the S penalty, P1 by prox_psd_trace
// and P2 by the fusion prox on P. The z-update is an entrywise 2x2 solve.
struct Problem {
    const ObservedCovariances* covs = nullptr;
    SPenalty s_penalty = SPenalty::Fused;
    std::vector<double> l1;  // per layer
    PairWeights s_pair;
    double group = 0.0;
    bool latent = false;
    std::vector<double> trace;
    PairWeights p_pair;
};

class Admm {
public:
    Admm(const Problem& pb, const SolverConfig& cfg)
        : pb_(pb), cfg_(cfg), k_(pb.covs->layers()), n_(pb.covs->dim()) {}

    JointEstimate run();

private:
    void prox_s(double step);
    void prox_p_fused(double step);

    const Problem& pb_;
    const SolverConfig& cfg_;
    std::size_t k_;
    std::size_t n_;

    std::vector<Matrix> r_, s1_, p1_, p2_;
    std::vector<Matrix> s_, p_;
    std::vector<Matrix> ur_, u1_, u2_, u3_;
    FusedWorkspace ws_;
    std::vector<double> vin_, vout_, lam_;
};

void Admm::prox_s(double step) {
    const bool clip = cfg_.admissible_set == AdmissibleSet::NonpositiveOffdiag;
    const bool diag = cfg_.scope.penalize_diagonal;
    const auto n = static_cast<Eigen::Index>(n_);
    const PairWeights pair = pb_.s_pair.scaled(1.0 / step);
    vin_.resize(k_);
    vout_.resize(k_);
    lam_.resize(k_);
    for (std::size_t a = 0; a < k_; ++a)
        lam_[a] = pb_.l1[a] / step;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = j; i < n; ++i) {
            for (std::size_t a = 0; a < k_; ++a)
                vin_[a] = s_[a](i, j) - u1_[a](i, j);
            if (i == j && !diag) {
                for (std::size_t a = 0; a < k_; ++a)
                    s1_[a](i, j) = vin_[a];
                continue;
            }
            if (pb_.s_penalty == SPenalty::Group)
                prox_group_l2(vin_, lam_[0], pb_.group / step, vout_);
            else
                prox_fused_l1(vin_, lam_, pair, vout_, ws_);
            for (std::size_t a = 0; a < k_; ++a) {
                double v = vout_[a];
                if (clip && i != j)
                    v = std::min(v, 0.0);
                s1_[a](i, j) = v;
                s1_[a](j, i) = v;
            }
        }
    if (clip && pb_.s_penalty == SPenalty::Group) {
        // Group shrink of the clipped values: prox of (norm + orthant) is
        // shrink after projection.
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = j + 1; i < n; ++i) {
                double sq = 0.0;
                for (std::size_t a = 0; a < k_; ++a) {
                    const double x = s_[a](i, j) - u1_[a](i, j);
                    const double t = lam_[0];
                    const double st = x > t ? x - t : (x < -t ? x + t : 0.0);
                    vin_[a] = std::min(st, 0.0);
                    sq += vin_[a] * vin_[a];
                }
                const double norm = std::sqrt(sq);
                const double g = pb_.group / step;
                const double f = norm > g ? 1.0 - g / norm : 0.0;
                for (std::size_t a = 0; a < k_; ++a) {
                    s1_[a](i, j) = f * vin_[a];
                    s1_[a](j, i) = f * vin_[a];
                }
            }
    }
}

void Admm::prox_p_fused(double step) {
    const auto n = static_cast<Eigen::Index>(n_);
    if (pb_.p_pair.all_zero() || k_ == 1) {
        for (std::size_t a = 0; a < k_; ++a)
            p2_[a] = p_[a] - u3_[a];
        return;
    }
    const PairWeights pair = pb_.p_pair.scaled(1.0 / step);
    const bool diag = cfg_.scope.fuse_latent_diagonal;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = j; i < n; ++i) {
            for (std::size_t a = 0; a < k_; ++a)
                vin_[a] = p_[a](i, j) - u3_[a](i, j);
            if (i == j && !diag) {
                for (std::size_t a = 0; a < k_; ++a)
                    p2_[a](i, j) = vin_[a];
                continue;
            }
            prox_fused_l1(vin_, 0.0, pair, vout_, ws_);
            for (std::size_t a = 0; a < k_; ++a) {
                p2_[a](i, j) = vout_[a];
                p2_[a](j, i) = vout_[a];
            }
        }
}

JointEstimate Admm::run() {
    const auto n = static_cast<Eigen::Index>(n_);
    const Matrix zero = Matrix::Zero(n, n);
    for (std::size_t a = 0; a < k_; ++a) {
        const Matrix& c = pb_.covs->covs[a].mat();
        Matrix s0 = Matrix::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            s0(i, i) = c(i, i) > 1e-8 ? 1.0 / c(i, i) : 1.0;
        s_.push_back(s0);
        p_.push_back(zero);
        r_.push_back(s0);
        s1_.push_back(s0);
        p1_.push_back(zero);
        p2_.push_back(zero);
        ur_.push_back(zero);
        u1_.push_back(zero);
        u2_.push_back(zero);
        u3_.push_back(zero);
    }

    JointEstimate out;
    double step = cfg_.step;
    const bool latent = pb_.latent;
    std::vector<Matrix> s_old(k_), p_old(k_);

    std::size_t it = 0;
    for (; it < cfg_.max_iters; ++it) {
        // x-update
        for (std::size_t a = 0; a < k_; ++a) {
            const SymMatrix target(Matrix(s_[a] - p_[a] - ur_[a]));
            r_[a] = prox_logdet(target, pb_.covs->covs[a], step).mat();
        }
        prox_s(step);
        if (latent) {
            for (std::size_t a = 0; a < k_; ++a)
                p1_[a] = prox_psd_trace(SymMatrix(Matrix(p_[a] - u2_[a])),
                                        pb_.trace[a] / step).mat();
            prox_p_fused(step);
        }

        // z-update
        for (std::size_t a = 0; a < k_; ++a) {
            s_old[a] = s_[a];
            p_old[a] = p_[a];
            const Matrix ra = r_[a] + ur_[a];
            const Matrix sb = s1_[a] + u1_[a];
            if (latent) {
                const Matrix pc = p1_[a] + u2_[a];
                const Matrix pd = p2_[a] + u3_[a];
                p_[a] = (2.0 * pc + 2.0 * pd - ra + sb) / 5.0;
                s_[a] = (ra + sb + p_[a]) / 2.0;
            } else {
                s_[a] = (ra + sb) / 2.0;
            }
        }

        // dual update and residuals
        double r2 = 0.0, d2 = 0.0, x2 = 0.0, z2 = 0.0, u2 = 0.0;
        for (std::size_t a = 0; a < k_; ++a) {
            const Matrix lin = s_[a] - p_[a];
            const Matrix res_r = r_[a] - lin;
            const Matrix res_s = s1_[a] - s_[a];
            ur_[a] += res_r;
            u1_[a] += res_s;
            r2 += res_r.squaredNorm() + res_s.squaredNorm();
            const Matrix ds = s_[a] - s_old[a];
            const Matrix dp = p_[a] - p_old[a];
            d2 += (ds - dp).squaredNorm() + ds.squaredNorm();
            x2 += r_[a].squaredNorm() + s1_[a].squaredNorm();
            z2 += lin.squaredNorm() + s_[a].squaredNorm();
            if (latent) {
                const Matrix res_p1 = p1_[a] - p_[a];
                const Matrix res_p2 = p2_[a] - p_[a];
                u2_[a] += res_p1;
                u3_[a] += res_p2;
                r2 += res_p1.squaredNorm() + res_p2.squaredNorm();
                d2 += 2.0 * dp.squaredNorm();
                x2 += p1_[a].squaredNorm() + p2_[a].squaredNorm();
                z2 += 2.0 * p_[a].squaredNorm();
                u2 += u2_[a].squaredNorm() + u3_[a].squaredNorm();
            }
            u2 += ur_[a].squaredNorm() + u1_[a].squaredNorm();
        }
        if (!std::isfinite(r2) || !std::isfinite(d2))
            throw_numerical("ADMM iterates diverged (non-finite residual)");
        const double rel_p = std::sqrt(r2) / std::max({std::sqrt(x2), std::sqrt(z2), 1e-12});
        const double rel_d = step * std::sqrt(d2) / std::max(step * std::sqrt(u2), 1e-12);
        if (cfg_.record_history)
            out.residual_history.emplace_back(rel_p, rel_d);
        if (rel_p <= cfg_.tol_primal && rel_d <= cfg_.tol_dual) {
            out.converged = true;
            ++it;
            break;
        }
        if (cfg_.adaptive_step && it < cfg_.max_iters / 2) {
            double f = 1.0;
            if (rel_p > 10.0 * rel_d)
                f = 2.0;
            else if (rel_d > 10.0 * rel_p)
                f = 0.5;
            if (f != 1.0) {
                step *= f;
                for (std::size_t a = 0; a < k_; ++a) {
                    ur_[a] /= f;
                    u1_[a] /= f;
                    u2_[a] /= f;
                    u3_[a] /= f;
                }
            }
        }
    }
    out.iterations = it;

    for (std::size_t a = 0; a < k_; ++a) {
        SymMatrix s_hat(s1_[a]);
        SymMatrix p_hat = latent ? SymMatrix(p1_[a]) : SymMatrix::zero(n_);
        const double lo = min_eigenvalue(s_hat - p_hat);
        if (!std::isfinite(lo))
            throw_numerical("ADMM produced a non-finite estimate");
        if (lo < cfg_.pd_floor) {
            // Diagonal of S is unpenalized by default; loading it restores
            // strict feasibility of S - P without touching the support.
            const double shift = cfg_.pd_floor - lo;
            Matrix m = s_hat.mat();
            m.diagonal().array() += shift;
            s_hat = SymMatrix(std::move(m));
        }
        out.s_hat.push_back(std::move(s_hat));
        out.p_hat.push_back(std::move(p_hat));
    }
    return out;
}

JointEstimate run_problem(const Problem& pb, const SolverConfig& cfg) {
    cfg.validate();
    pb.covs->validate();
    Admm admm(pb, cfg);
    return admm.run();
}

}  // namespace

JointEstimate solve_joint_hidden(const ObservedCovariances& covs, const PenaltyWeights& w,
                                 const SolverConfig& cfg) {
    covs.validate();
    w.validate();
    if (w.layers() != covs.layers())
        throw_invalid("penalty weights sized for " + std::to_string(w.layers()) +
                      " layers, covariances have " + std::to_string(covs.layers()));
    Problem pb;
    pb.covs = &covs;
    pb.s_penalty = SPenalty::Fused;
    pb.l1 = w.rho;
    pb.s_pair = w.rho_pair;
    pb.latent = true;
    pb.trace = w.beta;
    pb.p_pair = w.beta_pair;
    JointEstimate est = run_problem(pb, cfg);
    est.objective = joint_objective(est.s_hat, est.p_hat, covs, w, cfg.scope);
    if (!std::isfinite(est.objective))
        throw_numerical("joint solve ended at an infeasible point");
    return est;
}

JointEstimate solve_lvgl(const SymMatrix& cov, double rho, double beta,
                         const SolverConfig& cfg) {
    ObservedCovariances covs{{cov}, {}};
    return solve_joint_hidden(covs, PenaltyWeights::uniform(1, rho, beta, 0.0, 0.0), cfg);
}

JointEstimate solve_ggl(const ObservedCovariances& covs, double lambda1, double lambda2,
                        const SolverConfig& cfg) {
    covs.validate();
    if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0))
        throw_invalid("GGL penalties must be nonnegative");
    const std::size_t k = covs.layers();
    Problem pb;
    pb.covs = &covs;
    pb.s_penalty = SPenalty::Group;
    pb.l1.assign(k, lambda1);
    pb.s_pair = PairWeights(k, 0.0);
    pb.group = lambda2;
    pb.latent = false;
    JointEstimate est = run_problem(pb, cfg);
    est.objective = ggl_objective(est.s_hat, covs, lambda1, lambda2, cfg.scope);
    if (!std::isfinite(est.objective))
        throw_numerical("GGL solve ended at an infeasible point");
    return est;
}

JointEstimate solve_gl(const SymMatrix& cov, double lambda, const SolverConfig& cfg) {
    ObservedCovariances covs{{cov}, {}};
    return solve_ggl(covs, lambda, 0.0, cfg);
}

}  // namespace ggm
