#include "support.hpp"

#include "ggm/error.hpp"

#include <doctest.h>

#include <numeric>

using namespace ggm;

namespace {

SymMatrix scalar(double x) {
    Matrix m(1, 1);
    m(0, 0) = x;
    return SymMatrix(m);
}

SymMatrix diag(std::initializer_list<double> d) {
    Vector v(static_cast<Eigen::Index>(d.size()));
    Eigen::Index i = 0;
    for (double x : d)
        v(i++) = x;
    return SymMatrix::diagonal(v);
}

}  // namespace

TEST_CASE("prox_logdet scalar cases") {
    CHECK(prox_logdet(scalar(1), scalar(0), 1.0)(0, 0) ==
          doctest::Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-14));
    const double r = prox_logdet(scalar(1), scalar(2), 2.0)(0, 0);
    CHECK(r == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-14));
    CHECK(std::abs(2 - 1 / r + 2 * (r - 1)) < 1e-12);
}

TEST_CASE("prox_logdet approaches its anchor as tau grows") {
    const SymMatrix r = prox_logdet(SymMatrix::identity(2), SymMatrix::zero(2), 1e8);
    CHECK(test::max_abs(r.mat() - Matrix::Identity(2, 2)) < 1e-7);
}

TEST_CASE("prox_logdet stationarity on random instances") {
    Rng rng(101);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 1 + t % 20;
        const SymMatrix c = test::random_pd(n, rng);
        const SymMatrix a = test::random_sym(n, rng);
        const double tau = std::exp(rng.uniform(-3, 3));
        const SymMatrix r = prox_logdet(a, c, tau);
        CHECK(min_eigenvalue(r) > 0.0);
        const Matrix resid = c.mat() - r.mat().inverse() + tau * (r.mat() - a.mat());
        CHECK(resid.norm() <= 1e-8 * static_cast<double>(n));
    }
}

TEST_CASE("prox_logdet stays PD for strongly negative anchors") {
    const SymMatrix r = prox_logdet(diag({-1e6, -1e3}), SymMatrix::zero(2), 1.0);
    CHECK(min_eigenvalue(r) > 0.0);
    CHECK(r(0, 0) == doctest::Approx(1e-6).epsilon(1e-6));
}

TEST_CASE("prox_logdet rejects a nonpositive tau") {
    CHECK_THROWS_AS(prox_logdet(scalar(1), scalar(0), 0.0), Error);
}

TEST_CASE("soft_threshold examples") {
    Matrix m(2, 2);
    m << 5.0, 1.5, 1.5, 5.0;
    const SymMatrix a = soft_threshold(SymMatrix(m), 1.0, false);
    CHECK(a(0, 1) == doctest::Approx(0.5));
    CHECK(a(0, 0) == 5.0);
    CHECK(soft_threshold(SymMatrix(m), 1.0, true)(0, 0) == doctest::Approx(4.0));
    m << 0.0, -0.3, -0.3, 0.0;
    CHECK(soft_threshold(SymMatrix(m), 0.5, false)(0, 1) == 0.0);
    Rng rng(2);
    const SymMatrix r = test::random_sym(5, rng);
    CHECK(soft_threshold(r, 0.0, true) == r);
}

TEST_CASE("prox_psd_trace examples") {
    CHECK(prox_psd_trace(diag({3, 1, -1}), 1.0).mat().isApprox(diag({2, 0, 0}).mat(), 1e-12));
    CHECK(prox_psd_trace(diag({2, -1}), 0.0).mat().isApprox(diag({2, 0}).mat(), 1e-12));
}

TEST_CASE("prox_psd_trace matches a singular-value nuclear prox on PSD inputs") {
    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
        const double kappa = rng.uniform(0.01, 0.5);
        const SymMatrix a = test::random_pd(5, rng, kappa + 0.2);
        Eigen::JacobiSVD<Matrix> svd(a.mat(), Eigen::ComputeFullU | Eigen::ComputeFullV);
        Vector s = svd.singularValues();
        for (Eigen::Index i = 0; i < s.size(); ++i)
            s(i) = std::max(s(i) - kappa, 0.0);
        const Matrix ref = svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
        const SymMatrix got = prox_psd_trace(a, kappa);
        CHECK(test::max_abs(got.mat() - ref) < 1e-10);
        CHECK(test::max_abs(got.mat() - (a.mat() - kappa * Matrix::Identity(5, 5))) < 1e-10);
    }
}

TEST_CASE("prox_psd_trace beats random PSD perturbations") {
    Rng rng(9);
    for (int t = 0; t < 10; ++t) {
        const SymMatrix a = test::random_sym(4, rng);
        const double kappa = rng.uniform(0.0, 0.5);
        auto f = [&](const Matrix& p) {
            return 0.5 * (p - a.mat()).squaredNorm() + kappa * p.trace();
        };
        const SymMatrix p = prox_psd_trace(a, kappa);
        CHECK(min_eigenvalue(p) >= -1e-12);
        for (int j = 0; j < 100; ++j) {
            const Matrix b = test::random_matrix(4, rng) * 0.1;
            Matrix q = p.mat() + b * b.transpose();
            if (j % 2) {
                // Also try PSD points that shrink the output.
                q = (1.0 - rng.uniform(0, 0.2)) * p.mat() + b * b.transpose();
            }
            CHECK(f(p.mat()) <= f(q) + 1e-12);
        }
    }
}

TEST_CASE("prox_fused_l1 examples") {
    const std::vector<double> v1{2, 2};
    auto z = prox_fused_l1(v1, 0.5, PairWeights(2, 1.0));
    CHECK(z[0] == doctest::Approx(1.5));
    CHECK(z[1] == doctest::Approx(1.5));
    const std::vector<double> v2{4, 1};
    z = prox_fused_l1(v2, 0.0, PairWeights(2, 1.0));
    CHECK(z[0] == doctest::Approx(3.0));
    CHECK(z[1] == doctest::Approx(2.0));
    const std::vector<double> v3{1.5};
    CHECK(prox_fused_l1(v3, 1.0, PairWeights(1, 0.0))[0] == doctest::Approx(0.5));
}

TEST_CASE("prox_fused_l1 examples agree with the brute-force search") {
    const std::vector<double> v1{2, 2}, v2{4, 1};
    for (double x : test::fused_brute_force(v1, 0.5, PairWeights(2, 1.0)))
        CHECK(std::abs(x - 1.5) < 2e-3);
    const auto z = test::fused_brute_force(v2, 0.0, PairWeights(2, 1.0));
    CHECK(std::abs(z[0] - 3.0) < 2e-3);
    CHECK(std::abs(z[1] - 2.0) < 2e-3);
}

TEST_CASE("prox_fused_l1 matches brute force for K <= 3") {
    Rng rng(2024);
    for (int t = 0; t < 100; ++t) {
        const std::size_t k = 1 + t % 3;
        std::vector<double> v(k), upper(k * (k - 1) / 2);
        for (auto& x : v)
            x = rng.uniform(-2, 2);
        for (auto& x : upper)
            x = rng.uniform(0, 1);
        const PairWeights w(k, upper);
        const double lambda1 = rng.uniform(0, 0.8);
        const auto got = prox_fused_l1(v, lambda1, w);
        const auto ref = test::fused_brute_force(v, lambda1, w);
        for (std::size_t i = 0; i < k; ++i)
            CHECK(std::abs(got[i] - ref[i]) <= 2e-3);
        CHECK(test::fused_objective(got, v, std::vector<double>(k, lambda1), w) <=
              test::fused_objective(ref, v, std::vector<double>(k, lambda1), w) + 1e-12);
    }
}

TEST_CASE("prox_fused_l1 with per-coordinate lambda matches brute force") {
    Rng rng(77);
    FusedWorkspace ws;
    for (int t = 0; t < 60; ++t) {
        const std::size_t k = 2 + t % 2;
        std::vector<double> v(k), lam(k), upper(k * (k - 1) / 2), out(k);
        for (auto& x : v)
            x = rng.uniform(-2, 2);
        for (auto& x : lam)
            x = rng.uniform(0, 0.8);
        for (auto& x : upper)
            x = rng.uniform(0, 1);
        const PairWeights w(k, upper);
        prox_fused_l1(v, lam, w, out, ws);
        const auto ref = test::fused_brute_force(v, lam, w);
        for (std::size_t i = 0; i < k; ++i)
            CHECK(std::abs(out[i] - ref[i]) <= 2e-3);
    }
}

TEST_CASE("prox_fused_l1 is optimal for larger K") {
    // Objective at the output is not beaten by coordinate or pairwise moves.
    Rng rng(31);
    for (int t = 0; t < 50; ++t) {
        const std::size_t k = 4 + t % 3;
        std::vector<double> v(k), upper(k * (k - 1) / 2);
        for (auto& x : v)
            x = rng.uniform(-2, 2);
        const bool uniform = t % 2 == 0;
        const double u = rng.uniform(0, 0.6);
        for (auto& x : upper)
            x = uniform ? u : rng.uniform(0, 0.6);
        const PairWeights w(k, upper);
        const double lambda1 = rng.uniform(0, 0.5);
        const std::vector<double> lam(k, lambda1);
        const auto z = prox_fused_l1(v, lambda1, w);
        const double f = test::fused_objective(z, v, lam, w);
        for (int j = 0; j < 300; ++j) {
            auto y = z;
            for (auto& x : y)
                x += rng.uniform(-1e-3, 1e-3) * (rng.uniform() < 0.5 ? 1 : 100);
            CHECK(f <= test::fused_objective(y, v, lam, w) + 1e-12);
        }
    }
}

TEST_CASE("prox_fused_l1 is permutation equivariant and bounded") {
    Rng rng(55);
    for (int t = 0; t < 50; ++t) {
        const std::size_t k = 2 + t % 5;
        std::vector<double> v(k), upper(k * (k - 1) / 2);
        for (auto& x : v)
            x = rng.uniform(-3, 3);
        for (auto& x : upper)
            x = rng.uniform(0, 1);
        const PairWeights w(k, upper);
        const double lambda1 = rng.uniform(0, 1);
        const auto z = prox_fused_l1(v, lambda1, w);

        std::vector<std::size_t> perm(k);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = k - 1; i > 0; --i)
            std::swap(perm[i], perm[rng.below(i + 1)]);
        std::vector<double> pv(k);
        PairWeights pw(k, 0.0);
        for (std::size_t i = 0; i < k; ++i) {
            pv[i] = v[perm[i]];
            for (std::size_t j = i + 1; j < k; ++j)
                pw.set(i, j, w(std::min(perm[i], perm[j]), std::max(perm[i], perm[j])));
        }
        const auto pz = prox_fused_l1(pv, lambda1, pw);
        const double lo = std::min(0.0, *std::min_element(v.begin(), v.end()));
        const double hi = std::max(0.0, *std::max_element(v.begin(), v.end()));
        for (std::size_t i = 0; i < k; ++i) {
            CHECK(std::abs(pz[i] - z[perm[i]]) < 1e-9);
            CHECK(z[i] >= lo - 1e-12);
            CHECK(z[i] <= hi + 1e-12);
        }
    }
}

TEST_CASE("prox_fused_l1 rejects negative weights") {
    const std::vector<double> v{1, 2};
    CHECK_THROWS_AS(prox_fused_l1(v, 0.1, PairWeights(2, -1.0)), Error);
    CHECK_THROWS_AS(prox_fused_l1(v, -0.1, PairWeights(2, 1.0)), Error);
}

TEST_CASE("prox_group_l2 shrinks radially after soft thresholding") {
    const std::vector<double> v{3.0, -4.0};
    std::vector<double> out(2);
    prox_group_l2(v, 0.0, 2.5, out);
    CHECK(out[0] == doctest::Approx(1.5));
    CHECK(out[1] == doctest::Approx(-2.0));
    prox_group_l2(v, 0.0, 6.0, out);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 0.0);
    prox_group_l2(v, 1.0, 0.0, out);
    CHECK(out[0] == doctest::Approx(2.0));
    CHECK(out[1] == doctest::Approx(-3.0));
}

TEST_CASE("kernels are pure") {
    Rng rng(1);
    const SymMatrix a = test::random_sym(6, rng), c = test::random_pd(6, rng);
    CHECK(prox_logdet(a, c, 0.7) == prox_logdet(a, c, 0.7));
    CHECK(prox_psd_trace(a, 0.3) == prox_psd_trace(a, 0.3));
    const std::vector<double> v{0.3, -1.2, 2.0, 0.7};
    const PairWeights w(4, std::vector<double>{0.1, 0.5, 0.2, 0.3, 0.05, 0.4});
    CHECK(prox_fused_l1(v, 0.2, w) == prox_fused_l1(v, 0.2, w));
}
