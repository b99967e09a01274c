#include "ggm/oracle.hpp"

#include "ggm/error.hpp"

#include <cmath>
#include <limits>

namespace ggm {

double oracle_objective(const OracleProblem& problem, const std::vector<SymMatrix>& s,
                        const std::vector<SymMatrix>& p) {
    if (problem.kind == OracleKind::Ggl)
        return ggl_objective(s, problem.covs, problem.lambda1, problem.lambda2, problem.scope);
    return joint_objective(s, p, problem.covs, problem.weights, problem.scope);
}

namespace {

Matrix sign_of(const Matrix& m, bool diagonal) {
    Matrix out = m.unaryExpr([](double x) { return double((x > 0.0) - (x < 0.0)); });
    if (!diagonal)
        out.diagonal().setZero();
    return out;
}

}  // namespace

OracleResult reference_oracle(const OracleProblem& problem, const OracleOptions& opt) {
    const ObservedCovariances& covs = problem.covs;
    covs.validate();
    const std::size_t k = covs.layers();
    const std::size_t n = covs.dim();
    if (n > 5 || k > 3)
        throw_invalid("reference_oracle is limited to O <= 5 and K <= 3");
    const bool latent = problem.kind == OracleKind::Joint;
    if (latent) {
        problem.weights.validate();
        if (problem.weights.layers() != k)
            throw_invalid("oracle weights sized for a different layer count");
    }
    if (opt.budget == 0 || opt.stages == 0 || !(opt.initial_step > 0.0))
        throw_invalid("oracle budget, stages and initial step must be positive");

    const auto nn = static_cast<Eigen::Index>(n);
    const Matrix eye = Matrix::Identity(nn, nn);
    std::vector<Matrix> s(k, eye), p(k, latent ? Matrix(1e-3 * eye) : Matrix(Matrix::Zero(nn, nn)));
    if (opt.start_s) {
        if (opt.start_s->size() != k)
            throw_invalid("oracle start has the wrong layer count");
        for (std::size_t a = 0; a < k; ++a)
            s[a] = (*opt.start_s)[a].mat();
    }
    if (opt.start_p && latent) {
        if (opt.start_p->size() != k)
            throw_invalid("oracle start has the wrong layer count");
        for (std::size_t a = 0; a < k; ++a)
            p[a] = (*opt.start_p)[a].mat();
    }

    std::vector<Matrix> r_inv(k), gs(k), gp(k);
    std::vector<Matrix> best_s = s, best_p = p;
    double best = std::numeric_limits<double>::infinity();

    // Projects (s, p) in place, fills r_inv and returns the objective.
    auto project_and_evaluate = [&]() {
        double f = 0.0;
        for (std::size_t a = 0; a < k; ++a) {
            if (latent) {
                Eigen::SelfAdjointEigenSolver<Matrix> ep(0.5 * (p[a] + p[a].transpose()));
                const Vector lp = ep.eigenvalues().cwiseMax(0.0);
                p[a] = ep.eigenvectors() * lp.asDiagonal() * ep.eigenvectors().transpose();
                f += problem.weights.beta[a] * lp.sum();
            }
            const Matrix d = 0.5 * ((s[a] - p[a]) + (s[a] - p[a]).transpose());
            Eigen::SelfAdjointEigenSolver<Matrix> er(d);
            const Vector lr = er.eigenvalues().cwiseMax(problem.pd_floor);
            const Matrix& q = er.eigenvectors();
            const Matrix r = q * lr.asDiagonal() * q.transpose();
            s[a] = p[a] + r;
            r_inv[a] = q * lr.cwiseInverse().asDiagonal() * q.transpose();
            f += r.cwiseProduct(covs.covs[a].mat()).sum() - lr.array().log().sum();
        }
        // Penalties on the projected point.
        const bool dg = problem.scope.penalize_diagonal;
        auto l1 = [](const Matrix& m, bool diag) {
            return m.cwiseAbs().sum() - (diag ? 0.0 : m.diagonal().cwiseAbs().sum());
        };
        if (latent) {
            const PenaltyWeights& w = problem.weights;
            for (std::size_t a = 0; a < k; ++a) {
                f += w.rho[a] * l1(s[a], dg);
                for (std::size_t b = a + 1; b < k; ++b) {
                    f += w.rho_pair(a, b) * l1(s[a] - s[b], dg);
                    f += w.beta_pair(a, b) * l1(p[a] - p[b], problem.scope.fuse_latent_diagonal);
                }
            }
        } else {
            for (std::size_t a = 0; a < k; ++a)
                f += problem.lambda1 * l1(s[a], dg);
            if (problem.lambda2 > 0.0)
                for (Eigen::Index i = 0; i < nn; ++i)
                    for (Eigen::Index j = 0; j < nn; ++j) {
                        if (i == j && !dg)
                            continue;
                        double sq = 0.0;
                        for (std::size_t a = 0; a < k; ++a)
                            sq += s[a](i, j) * s[a](i, j);
                        f += problem.lambda2 * std::sqrt(sq);
                    }
        }
        return f;
    };

    auto subgradient = [&]() {
        const bool dg = problem.scope.penalize_diagonal;
        double g2 = 0.0;
        for (std::size_t a = 0; a < k; ++a) {
            const Matrix smooth = covs.covs[a].mat() - r_inv[a];
            if (latent) {
                const PenaltyWeights& w = problem.weights;
                gs[a] = smooth + w.rho[a] * sign_of(s[a], dg);
                gp[a] = -smooth + w.beta[a] * eye;
                for (std::size_t b = 0; b < k; ++b) {
                    if (b == a)
                        continue;
                    gs[a] += w.rho_pair(a, b) * sign_of(s[a] - s[b], dg);
                    gp[a] += w.beta_pair(a, b) *
                             sign_of(p[a] - p[b], problem.scope.fuse_latent_diagonal);
                }
                g2 += gp[a].squaredNorm();
            } else {
                gs[a] = smooth + problem.lambda1 * sign_of(s[a], dg);
            }
        }
        if (!latent && problem.lambda2 > 0.0)
            for (Eigen::Index i = 0; i < nn; ++i)
                for (Eigen::Index j = 0; j < nn; ++j) {
                    if (i == j && !dg)
                        continue;
                    double sq = 0.0;
                    for (std::size_t a = 0; a < k; ++a)
                        sq += s[a](i, j) * s[a](i, j);
                    if (sq == 0.0)
                        continue;
                    const double norm = std::sqrt(sq);
                    for (std::size_t a = 0; a < k; ++a)
                        gs[a](i, j) += problem.lambda2 * s[a](i, j) / norm;
                }
        for (std::size_t a = 0; a < k; ++a)
            g2 += gs[a].squaredNorm();
        return std::sqrt(g2);
    };

    best = project_and_evaluate();
    best_s = s;
    best_p = p;
    const std::size_t per_stage = std::max<std::size_t>(1, opt.budget / opt.stages);
    double alpha0 = opt.initial_step * std::sqrt(static_cast<double>(n));
    std::size_t steps = 0;
    for (std::size_t stage = 0; stage < opt.stages && steps < opt.budget; ++stage) {
        s = best_s;
        p = best_p;
        project_and_evaluate();
        const std::size_t len = stage + 1 == opt.stages ? opt.budget - steps : per_stage;
        for (std::size_t t = 0; t < len && steps < opt.budget; ++t, ++steps) {
            const double g = subgradient();
            if (!(g > 0.0))
                break;
            const double alpha = alpha0 / std::sqrt(static_cast<double>(t + 1)) / g;
            for (std::size_t a = 0; a < k; ++a) {
                s[a] -= alpha * gs[a];
                if (latent)
                    p[a] -= alpha * gp[a];
            }
            const double f = project_and_evaluate();
            if (f < best) {
                best = f;
                best_s = s;
                best_p = p;
            }
        }
        alpha0 *= 0.5;
    }

    OracleResult out;
    for (std::size_t a = 0; a < k; ++a) {
        out.s.emplace_back(best_s[a]);
        out.p.emplace_back(latent ? best_p[a] : Matrix(Matrix::Zero(nn, nn)));
    }
    out.objective = oracle_objective(problem, out.s, out.p);
    out.steps = steps;
    return out;
}

}  // namespace ggm
