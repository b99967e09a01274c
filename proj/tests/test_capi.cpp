// Exercises the shared library through its C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ggm/ggm.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace {

ggm_matrix* make(std::size_t n, std::vector<double> v) {
    ggm_matrix* m = nullptr;
    REQUIRE(ggm_matrix_create(n, v.data(), &m) == GGM_OK);
    return m;
}

std::string temp(const std::string& name) {
    return (std::filesystem::temp_directory_path() /
            ("ggm_capi_" + std::to_string(::getpid()) + "_" + name))
        .string();
}

}  // namespace

TEST_CASE("version and status names") {
    CHECK(std::string(ggm_version()).size() > 0);
    CHECK(std::string(ggm_status_name(GGM_ERR_PARSE)) == "parse error");
}

TEST_CASE("matrix handles") {
    ggm_matrix* m = make(2, {1, 2, 4, 3});
    CHECK(ggm_matrix_dim(m) == 2);
    double out[4];
    CHECK(ggm_matrix_copy(m, out, 4) == GGM_OK);
    CHECK(out[1] == 3.0);
    CHECK(out[2] == 3.0);
    CHECK(ggm_matrix_copy(m, out, 3) == GGM_ERR_INVALID_INPUT);
    CHECK(std::string(ggm_last_error()).find("too small") != std::string::npos);

    const std::string path = temp("m.csv");
    CHECK(ggm_matrix_write_csv(m, path.c_str()) == GGM_OK);
    ggm_matrix* back = nullptr;
    CHECK(ggm_matrix_read_csv(path.c_str(), &back) == GGM_OK);
    double again[4];
    ggm_matrix_copy(back, again, 4);
    CHECK(std::equal(out, out + 4, again));
    std::remove(path.c_str());
    ggm_matrix_free(back);
    ggm_matrix_free(m);
    ggm_matrix_free(nullptr);
}

TEST_CASE("errors map to status codes") {
    ggm_matrix* m = nullptr;
    CHECK(ggm_matrix_read_csv("/nonexistent/x.csv", &m) == GGM_ERR_IO);
    CHECK(m == nullptr);
    const std::string bad = temp("bad.csv");
    std::ofstream(bad) << "1,2\n3\n";
    CHECK(ggm_matrix_read_csv(bad.c_str(), &m) == GGM_ERR_PARSE);
    std::remove(bad.c_str());
    ggm_experiment* x = nullptr;
    CHECK(ggm_experiment_create("tc7", &x) == GGM_ERR_CONFIG);
    CHECK(ggm_matrix_create(2, nullptr, &m) == GGM_ERR_INVALID_INPUT);
}

TEST_CASE("solvers through the C API") {
    ggm_matrix* c1 = make(3, {2, 0.5, 0, 0.5, 2, 0.3, 0, 0.3, 1});
    ggm_matrix* c2 = make(3, {2, 0.4, 0, 0.4, 2, 0.2, 0, 0.2, 1.2});
    const ggm_matrix* covs[] = {c1, c2};
    ggm_solver_options opts;
    ggm_solver_options_default(&opts);
    CHECK(opts.max_iters == 2000);

    ggm_weights* w = nullptr;
    REQUIRE(ggm_weights_create(2, &w) == GGM_OK);
    CHECK(ggm_weights_set_uniform(w, 0.05, 0.2, 0.05, 0.05) == GGM_OK);
    CHECK(ggm_weights_set_pair(w, 1, 0, 0.1, 0.1) == GGM_OK);
    CHECK(ggm_weights_set_layer(w, 2, 0.1, 0.1) == GGM_ERR_INVALID_INPUT);
    CHECK(ggm_weights_set_layer(w, 0, -1, 0.1) == GGM_ERR_INVALID_INPUT);

    ggm_estimate* e = nullptr;
    REQUIRE(ggm_solve_joint(covs, 2, w, &opts, &e) == GGM_OK);
    CHECK(ggm_estimate_layers(e) == 2);
    CHECK(ggm_estimate_converged(e) == 1);
    CHECK(std::isfinite(ggm_estimate_objective(e)));
    CHECK(ggm_matrix_dim(ggm_estimate_s(e, 1)) == 3);
    CHECK(ggm_estimate_p(e, 2) == nullptr);

    ggm_estimate *gl = nullptr, *lv = nullptr, *ggl = nullptr;
    CHECK(ggm_solve_gl(c1, 0.05, nullptr, &gl) == GGM_OK);
    CHECK(ggm_solve_lvgl(c1, 0.05, 1e6, nullptr, &lv) == GGM_OK);
    CHECK(ggm_solve_ggl(covs, 2, 0.05, 0.0, nullptr, &ggl) == GGM_OK);
    double a[9], b[9], g[9];
    ggm_matrix_copy(ggm_estimate_s(gl, 0), a, 9);
    ggm_matrix_copy(ggm_estimate_s(lv, 0), b, 9);
    ggm_matrix_copy(ggm_estimate_s(ggl, 0), g, 9);
    for (int i = 0; i < 9; ++i) {
        CHECK(std::abs(a[i] - b[i]) < 1e-3);
        CHECK(std::abs(a[i] - g[i]) < 1e-3);
    }

    const ggm_matrix* est[] = {ggm_estimate_s(gl, 0)};
    const ggm_matrix* truth[] = {ggm_estimate_s(lv, 0)};
    double err = -1;
    CHECK(ggm_mean_normalized_error(est, truth, 1, &err) == GGM_OK);
    CHECK(err < 1e-6);

    ggm_estimate* orc = nullptr;
    CHECK(ggm_oracle_solve(GGM_ORACLE_JOINT, covs, 2, w, 0, 0, 20000, &orc) == GGM_OK);
    CHECK(std::abs(ggm_estimate_objective(orc) - ggm_estimate_objective(e)) /
              std::abs(ggm_estimate_objective(e)) <
          1e-2);

    opts.tol_primal = 0;
    ggm_estimate* none = nullptr;
    CHECK(ggm_solve_gl(c1, 0.05, &opts, &none) == GGM_ERR_INVALID_INPUT);
    CHECK(none == nullptr);

    ggm_estimate_free(orc);
    ggm_estimate_free(ggl);
    ggm_estimate_free(lv);
    ggm_estimate_free(gl);
    ggm_estimate_free(e);
    ggm_weights_free(w);
    ggm_matrix_free(c2);
    ggm_matrix_free(c1);
}

TEST_CASE("experiments through the C API") {
    ggm_experiment* x = nullptr;
    REQUIRE(ggm_experiment_create("tc1", &x) == GGM_OK);
    const char* settings[][2] = {{"k_sweep", "1,2"}, {"n_realizations", "1"},
                                 {"rho_grid", "0.05"}, {"beta_grid", "0.2"},
                                 {"lambda2_grid", "0.05"}, {"eta_grid", "1"}};
    for (auto& kv : settings)
        CHECK(ggm_experiment_set(x, kv[0], kv[1]) == GGM_OK);
    CHECK(ggm_experiment_set(x, "nonsense", "1") == GGM_ERR_CONFIG);
    CHECK(std::string(ggm_experiment_dump(x)).find("k_sweep=1,2") != std::string::npos);

    ggm_table* t = nullptr;
    REQUIRE(ggm_experiment_run(x, &t) == GGM_OK);
    CHECK(ggm_table_rows(t) == 2);
    CHECK(ggm_table_xaxis(t, 1) == 2.0);
    CHECK(ggm_table_solver_invocations(t) == 8);
    CHECK(ggm_table_mean(t, 0, 3) == ggm_table_median(t, 0, 3));

    const std::string csv = temp("t.csv"), man = temp("t.manifest.txt");
    CHECK(ggm_table_write_csv(t, csv.c_str()) == GGM_OK);
    CHECK(ggm_table_write_manifest(t, man.c_str()) == GGM_OK);
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "xaxis,GL,GGL,LVGL,Joint");
    std::remove(csv.c_str());
    std::remove(man.c_str());
    ggm_table_free(t);
    ggm_experiment_free(x);
}
