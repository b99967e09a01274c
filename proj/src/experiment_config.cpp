#include "ggm/error.hpp"
#include "ggm/experiments.hpp"
#include "ggm/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ggm {

namespace {

[[noreturn]] void config_error(const std::string& msg) {
    throw Error(ErrorKind::ConfigError, msg);
}

std::string_view trim(std::string_view s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string_view::npos)
        return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start)));
        if (pos == std::string_view::npos)
            return out;
        start = pos + 1;
    }
}

std::uint64_t to_u64(std::string_view key, std::string_view v) {
    std::uint64_t out = 0;
    v = trim(v);
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        config_error(std::string(key) + ": expected a nonnegative integer, got '" +
                     std::string(v) + "'");
    return out;
}

std::size_t to_size(std::string_view key, std::string_view v) {
    return static_cast<std::size_t>(to_u64(key, v));
}

double to_double(std::string_view key, std::string_view v) {
    double out = 0.0;
    v = trim(v);
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
        config_error(std::string(key) + ": expected a number, got '" + std::string(v) + "'");
    return out;
}

bool to_bool(std::string_view key, std::string_view v) {
    v = trim(v);
    if (v == "1" || v == "true" || v == "yes" || v == "on")
        return true;
    if (v == "0" || v == "false" || v == "no" || v == "off")
        return false;
    config_error(std::string(key) + ": expected a boolean, got '" + std::string(v) + "'");
}

// "1,2,5" or "1..6" or "50..500:50"
std::vector<std::size_t> to_size_list(std::string_view key, std::string_view v) {
    std::vector<std::size_t> out;
    for (auto item : split(v, ',')) {
        const auto dots = item.find("..");
        if (dots == std::string_view::npos) {
            out.push_back(to_size(key, item));
            continue;
        }
        const std::size_t lo = to_size(key, item.substr(0, dots));
        std::string_view rest = item.substr(dots + 2);
        std::size_t step = 1;
        if (const auto colon = rest.find(':'); colon != std::string_view::npos) {
            step = to_size(key, rest.substr(colon + 1));
            rest = rest.substr(0, colon);
        }
        const std::size_t hi = to_size(key, rest);
        if (step == 0 || hi < lo)
            config_error(std::string(key) + ": bad range '" + std::string(item) + "'");
        for (std::size_t x = lo; x <= hi; x += step)
            out.push_back(x);
    }
    return out;
}

// "0.01,0.1" or "log:lo:hi:count"
std::vector<double> to_grid(std::string_view key, std::string_view v) {
    v = trim(v);
    if (v.substr(0, 4) == "log:") {
        const auto parts = split(v.substr(4), ':');
        if (parts.size() != 3)
            config_error(std::string(key) + ": log grid is log:lo:hi:count");
        const double lo = to_double(key, parts[0]);
        const double hi = to_double(key, parts[1]);
        const std::size_t count = to_size(key, parts[2]);
        if (!(lo > 0.0) || !(hi >= lo) || count == 0)
            config_error(std::string(key) + ": log grid needs 0 < lo <= hi and count >= 1");
        std::vector<double> out;
        for (std::size_t i = 0; i < count; ++i) {
            const double t =
                count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
            out.push_back(lo * std::pow(hi / lo, t));
        }
        return out;
    }
    std::vector<double> out;
    for (auto item : split(v, ','))
        out.push_back(to_double(key, item));
    return out;
}

// Shortest text that reads back to the same double.
std::string fmt(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ',';
        if constexpr (std::is_floating_point_v<T>)
            out += fmt(v[i]);
        else
            out += std::to_string(v[i]);
    }
    return out;
}

}  // namespace

ExperimentId parse_experiment_id(std::string_view s) {
    if (s == "tc1")
        return ExperimentId::Tc1;
    if (s == "tc2")
        return ExperimentId::Tc2;
    if (s == "tc3")
        return ExperimentId::Tc3;
    config_error("unknown experiment '" + std::string(s) + "' (expected tc1, tc2 or tc3)");
}

const char* to_string(ExperimentId id) {
    switch (id) {
    case ExperimentId::Tc1: return "tc1";
    case ExperimentId::Tc2: return "tc2";
    case ExperimentId::Tc3: return "tc3";
    }
    return "?";
}

ExperimentConfig ExperimentConfig::defaults(ExperimentId id) {
    ExperimentConfig c;
    c.id = id;
    c.rho_grid = to_grid("rho_grid", "log:0.005:0.08:5");
    c.beta_grid = to_grid("beta_grid", "log:0.04:0.64:5");
    c.lambda2_grid = to_grid("lambda2_grid", "log:0.01:0.16:5");
    c.solver.tol_primal = 1e-4;
    c.solver.tol_dual = 1e-4;
    c.solver.record_history = false;
    return c;
}

void ExperimentConfig::set(std::string_view key_in, std::string_view value) {
    std::string key(trim(key_in));
    for (char& ch : key)
        if (ch == '-')
            ch = '_';
    value = trim(value);
    if (key == "experiment") id = parse_experiment_id(value);
    else if (key == "n") n = to_size(key, value);
    else if (key == "p") p = to_double(key, value);
    else if (key == "neighbors") neighbors = to_size(key, value);
    else if (key == "rewire_p") rewire_p = to_double(key, value);
    else if (key == "n_rewire") {
        if (value == "auto")
            n_rewire.reset();
        else
            n_rewire = to_size(key, value);
    }
    else if (key == "n_hidden") n_hidden = to_size(key, value);
    else if (key == "weight_lo") precision.weight_lo = to_double(key, value);
    else if (key == "weight_hi") precision.weight_hi = to_double(key, value);
    else if (key == "diag_margin") precision.diag_margin = to_double(key, value);
    else if (key == "k_sweep") k_sweep = to_size_list(key, value);
    else if (key == "m_sweep") m_sweep = to_size_list(key, value);
    else if (key == "o_sweep") o_sweep = to_size_list(key, value);
    else if (key == "k") k = to_size(key, value);
    else if (key == "m") m = to_size(key, value);
    else if (key == "n_realizations") n_realizations = to_size(key, value);
    else if (key == "base_seed") base_seed = to_u64(key, value);
    else if (key == "rho_grid") rho_grid = to_grid(key, value);
    else if (key == "beta_grid") beta_grid = to_grid(key, value);
    else if (key == "lambda2_grid") lambda2_grid = to_grid(key, value);
    else if (key == "eta_grid") eta_grid = to_grid(key, value);
    else if (key == "tuning_realizations") tuning_realizations = to_size(key, value);
    else if (key == "step") solver.step = to_double(key, value);
    else if (key == "max_iters") solver.max_iters = to_size(key, value);
    else if (key == "tol_primal") solver.tol_primal = to_double(key, value);
    else if (key == "tol_dual") solver.tol_dual = to_double(key, value);
    else if (key == "pd_floor") solver.pd_floor = to_double(key, value);
    else if (key == "adaptive_step") solver.adaptive_step = to_bool(key, value);
    else if (key == "penalize_diagonal") solver.scope.penalize_diagonal = to_bool(key, value);
    else if (key == "fuse_latent_diagonal") solver.scope.fuse_latent_diagonal = to_bool(key, value);
    else if (key == "admissible_set") {
        if (value == "symmetric")
            solver.admissible_set = AdmissibleSet::Symmetric;
        else if (value == "nonpositive_offdiag")
            solver.admissible_set = AdmissibleSet::NonpositiveOffdiag;
        else
            config_error("admissible_set: expected symmetric or nonpositive_offdiag");
    }
    else if (key == "layers") {
        layers.clear();
        if (!value.empty())
            for (auto item : split(value, ','))
                layers.emplace_back(item);
    }
    else if (key == "synthetic_substitute") synthetic_substitute = to_bool(key, value);
    else if (key == "binarize") binarize = to_bool(key, value);
    else if (key == "substitute_n") substitute_n = to_size(key, value);
    else if (key == "substitute_p") substitute_p = to_double(key, value);
    else if (key == "workers") workers = to_size(key, value);
    else config_error("unknown configuration key '" + key + "'");
}

void ExperimentConfig::load_text(std::string_view text) {
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            config_error("config line " + std::to_string(line_no) + ": expected key=value");
        set(line.substr(0, eq), line.substr(eq + 1));
    }
}

void ExperimentConfig::load_file(const std::string& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const Error& e) {
        config_error(e.what());
    }
    load_text(text);
}

void ExperimentConfig::validate() const {
    auto need = [](bool ok, const std::string& msg) {
        if (!ok)
            config_error(msg);
    };
    need(n >= 2, "n must be at least 2");
    need(p >= 0.0 && p <= 1.0, "p must lie in [0, 1]");
    need(rewire_p >= 0.0 && rewire_p <= 1.0, "rewire_p must lie in [0, 1]");
    need(precision.weight_lo > 0.0 && precision.weight_hi >= precision.weight_lo,
         "need 0 < weight_lo <= weight_hi");
    need(precision.diag_margin > 0.0, "diag_margin must be positive");
    need(n_realizations >= 1, "n_realizations must be positive");
    need(tuning_realizations >= 1, "tuning_realizations must be positive");
    need(m >= 1 && k >= 1, "k and m must be positive");
    need(!rho_grid.empty() && !beta_grid.empty() && !lambda2_grid.empty() && !eta_grid.empty(),
         "hyperparameter grids must be nonempty");
    for (const auto* g : {&rho_grid, &beta_grid, &lambda2_grid, &eta_grid})
        for (double x : *g)
            need(x >= 0.0, "hyperparameter grid values must be nonnegative");
    need(workers >= 1, "workers must be positive");
    try {
        solver.validate();
    } catch (const Error& e) {
        config_error(e.what());
    }
    switch (id) {
    case ExperimentId::Tc1:
        need(!k_sweep.empty(), "k_sweep must be nonempty");
        for (auto v : k_sweep)
            need(v >= 1, "k_sweep values must be positive");
        need(n_hidden < n, "n_hidden must be smaller than n");
        need(m >= 1, "m must be positive");
        break;
    case ExperimentId::Tc2:
        need(!m_sweep.empty(), "m_sweep must be nonempty");
        for (auto v : m_sweep)
            need(v >= 1, "m_sweep values must be positive");
        need(n_hidden < n, "n_hidden must be smaller than n");
        need(neighbors % 2 == 0 && neighbors < n, "neighbors must be even and below n");
        break;
    case ExperimentId::Tc3:
        need(!o_sweep.empty(), "o_sweep must be nonempty");
        need(!layers.empty() || synthetic_substitute,
             "tc3 needs layer files (layers=...) or synthetic_substitute=true");
        for (auto v : o_sweep)
            need(v >= 1, "o_sweep values must be positive");
        break;
    }
}

std::string ExperimentConfig::dump() const {
    std::ostringstream o;
    o << "experiment=" << to_string(id) << '\n'
      << "n=" << n << '\n'
      << "p=" << fmt(p) << '\n'
      << "neighbors=" << neighbors << '\n'
      << "rewire_p=" << fmt(rewire_p) << '\n'
      << "n_rewire=" << (n_rewire ? std::to_string(*n_rewire) : std::string("auto")) << '\n'
      << "n_hidden=" << n_hidden << '\n'
      << "weight_lo=" << fmt(precision.weight_lo) << '\n'
      << "weight_hi=" << fmt(precision.weight_hi) << '\n'
      << "diag_margin=" << fmt(precision.diag_margin) << '\n'
      << "k_sweep=" << join(k_sweep) << '\n'
      << "m_sweep=" << join(m_sweep) << '\n'
      << "o_sweep=" << join(o_sweep) << '\n'
      << "k=" << k << '\n'
      << "m=" << m << '\n'
      << "n_realizations=" << n_realizations << '\n'
      << "base_seed=" << base_seed << '\n'
      << "rho_grid=" << join(rho_grid) << '\n'
      << "beta_grid=" << join(beta_grid) << '\n'
      << "lambda2_grid=" << join(lambda2_grid) << '\n'
      << "eta_grid=" << join(eta_grid) << '\n'
      << "tuning_realizations=" << tuning_realizations << '\n'
      << "step=" << fmt(solver.step) << '\n'
      << "max_iters=" << solver.max_iters << '\n'
      << "tol_primal=" << fmt(solver.tol_primal) << '\n'
      << "tol_dual=" << fmt(solver.tol_dual) << '\n'
      << "pd_floor=" << fmt(solver.pd_floor) << '\n'
      << "adaptive_step=" << (solver.adaptive_step ? "true" : "false") << '\n'
      << "penalize_diagonal=" << (solver.scope.penalize_diagonal ? "true" : "false") << '\n'
      << "fuse_latent_diagonal=" << (solver.scope.fuse_latent_diagonal ? "true" : "false") << '\n'
      << "admissible_set="
      << (solver.admissible_set == AdmissibleSet::Symmetric ? "symmetric" : "nonpositive_offdiag")
      << '\n'
      << "layers=" << [&] {
             std::string s;
             for (std::size_t i = 0; i < layers.size(); ++i)
                 s += (i ? "," : "") + layers[i];
             return s;
         }() << '\n'
      << "synthetic_substitute=" << (synthetic_substitute ? "true" : "false") << '\n'
      << "binarize=" << (binarize ? "true" : "false") << '\n'
      << "substitute_n=" << substitute_n << '\n'
      << "substitute_p=" << fmt(substitute_p) << '\n';
    return o.str();
}

}  // namespace ggm
