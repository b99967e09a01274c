#pragma once

#include "ggm/graph.hpp"
#include "ggm/solvers.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ggm {

enum class ExperimentId { Tc1, Tc2, Tc3 };

ExperimentId parse_experiment_id(std::string_view s);
const char* to_string(ExperimentId id);

enum Method : std::size_t { kGL = 0, kGGL = 1, kLVGL = 2, kJoint = 3 };
inline constexpr std::array<const char*, 4> kMethodNames{"GL", "GGL", "LVGL", "Joint"};

/// Flat key=value configuration. Every key can also be given on the command
/// line as --key value. See README for the key list.
struct ExperimentConfig {
    ExperimentId id = ExperimentId::Tc1;

    // ground-truth graphs
    std::size_t n = 20;
    double p = 0.15;
    std::size_t neighbors = 4;
    double rewire_p = 0.15;
    std::optional<std::size_t> n_rewire;  // unset: ceil(10% of base edges)
    std::size_t n_hidden = 2;
    PrecisionOptions precision;

    // sweep axes; only the one belonging to the experiment is swept
    std::vector<std::size_t> k_sweep{1, 2, 3, 4, 5, 6};
    std::vector<std::size_t> m_sweep{50, 100, 150, 200, 250, 300, 350, 400, 450, 500};
    std::vector<std::size_t> o_sweep{25, 26, 27, 28, 29, 30, 31};
    std::size_t k = 4;
    std::size_t m = 200;

    std::size_t n_realizations = 20;
    std::uint64_t base_seed = 1;

    // hyperparameter grids, tied across layers
    std::vector<double> rho_grid;
    std::vector<double> beta_grid;
    std::vector<double> lambda2_grid;
    std::vector<double> eta_grid{0.5, 1.0, 2.0};
    std::size_t tuning_realizations = 1;

    SolverConfig solver;

    // test case 3 data
    std::vector<std::string> layers;
    bool synthetic_substitute = false;
    bool binarize = false;
    std::size_t substitute_n = 32;
    double substitute_p = 0.1;

    std::size_t workers = 1;

    static ExperimentConfig defaults(ExperimentId id);

    /// Throws ConfigError for unknown keys or malformed values.
    void set(std::string_view key, std::string_view value);
    /// '#' comments, blank lines and "key = value" lines.
    void load_text(std::string_view text);
    void load_file(const std::string& path);
    void validate() const;
    /// Canonical key=value listing of every setting.
    std::string dump() const;
};

struct Hyperparameters {
    double rho = 0.0;    // GL lambda, GGL lambda1
    double beta = 0.0;   // LVGL/Joint
    double second = 0.0; // GGL lambda2, Joint eta
};

struct ResultRow {
    double xaxis = 0.0;
    std::array<double, 4> mean{};
    /// Per-realization normalized errors, realization order.
    std::array<std::vector<double>, 4> errors;
    std::array<Hyperparameters, 4> selected;

    double median(Method m) const;
};

struct ResultTable {
    ExperimentId id = ExperimentId::Tc1;
    std::vector<ResultRow> rows;
    std::size_t solver_invocations = 0;
    std::size_t tuning_invocations = 0;
    std::size_t n_realizations = 0;
    /// Support differences between layer pairs of the first realization per row.
    std::vector<std::vector<std::size_t>> pair_support_difference;
};

ResultTable run_test_case_1(const ExperimentConfig& cfg);
ResultTable run_test_case_2(const ExperimentConfig& cfg);
ResultTable run_test_case_3(const ExperimentConfig& cfg);
ResultTable run_experiment(const ExperimentConfig& cfg);

/// Header "xaxis,GL,GGL,LVGL,Joint", one row per sweep value, 6 significant digits.
std::string format_csv(const ResultTable& table);
void emit_csv(const ResultTable& table, const std::string& path);

std::string format_manifest(const ResultTable& table, const ExperimentConfig& cfg);
/// "<csv path without .csv>.manifest.txt"
std::string manifest_path_for(const std::string& csv_path);

/// Runs fn(0..count-1) on `workers` threads. Each index runs exactly once;
/// callers write results by index so output never depends on scheduling.
template <class Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn);

}  // namespace ggm

#include "ggm/detail/parallel.hpp"
