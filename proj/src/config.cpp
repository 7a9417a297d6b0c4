#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nskr/config.hpp"
#include "nskr/norms.hpp"

namespace nskr {

const char* to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::linear_decay: return "linear_decay";
        case ExperimentKind::energy_exponents: return "energy_exponents";
        case ExperimentKind::strichartz: return "strichartz";
        case ExperimentKind::estimate_constants: return "estimate_constants";
        case ExperimentKind::picard: return "picard";
        case ExperimentKind::phase_diagram: return "phase_diagram";
        case ExperimentKind::single_run: return "single_run";
    }
    return "?";
}

std::optional<ExperimentKind> experiment_kind_from(const std::string& name) {
    for (ExperimentKind k :
         {ExperimentKind::linear_decay, ExperimentKind::energy_exponents, ExperimentKind::strichartz,
          ExperimentKind::estimate_constants, ExperimentKind::picard, ExperimentKind::phase_diagram,
          ExperimentKind::single_run})
        if (name == to_string(k)) return k;
    return std::nullopt;
}

namespace {
std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}
}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

ConfigFile ConfigFile::parse_text(const std::string& text) {
    ConfigFile cf;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config: malformed section at line " +
                                            std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key = value at line " +
                                        std::to_string(lineno));
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config: empty key at line " + std::to_string(lineno));
        cf.data_[section][key] = val;
    }
    return cf;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    auto s = data_.find(section);
    return s != data_.end() && s->second.count(key) > 0;
}

std::string ConfigFile::get(const std::string& section, const std::string& key) const {
    if (!has(section, key))
        throw std::invalid_argument("config: missing required field [" + section + "] " + key);
    return data_.at(section).at(key);
}

std::string ConfigFile::get_or(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
    return has(section, key) ? data_.at(section).at(key) : fallback;
}

double ConfigFile::number(const std::string& section, const std::string& key) const {
    const std::string v = get(section, key);
    char* end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || trim(end).size() > 0)
        throw std::invalid_argument("config: field [" + section + "] " + key +
                                    " is not a number: " + v);
    return x;
}

double ConfigFile::number_or(const std::string& section, const std::string& key,
                             double fallback) const {
    return has(section, key) ? number(section, key) : fallback;
}

long ConfigFile::integer_or(const std::string& section, const std::string& key,
                            long fallback) const {
    if (!has(section, key)) return fallback;
    double x = number(section, key);
    long l = std::lround(x);
    if (std::abs(x - double(l)) > 1e-9)
        throw std::invalid_argument("config: field [" + section + "] " + key + " must be integer");
    return l;
}

std::vector<double> ConfigFile::list(const std::string& section, const std::string& key) const {
    std::string v = get(section, key);
    std::vector<double> out;
    std::istringstream ss(v);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cell = trim(cell);
        if (cell.empty()) continue;
        char* end = nullptr;
        double x = std::strtod(cell.c_str(), &end);
        if (end == cell.c_str())
            throw std::invalid_argument("config: field [" + section + "] " + key +
                                        " has a non-numeric entry: " + cell);
        out.push_back(x);
    }
    if (out.empty())
        throw std::invalid_argument("config: field [" + section + "] " + key + " is an empty list");
    return out;
}

std::vector<double> ConfigFile::list_or(const std::string& section, const std::string& key,
                                        const std::vector<double>& fallback) const {
    return has(section, key) ? list(section, key) : fallback;
}

std::string ConfigFile::canonical_text() const {
    std::ostringstream out;
    for (const auto& [sec, kv] : data_)
        for (const auto& [k, v] : kv) out << sec << "." << k << "=" << v << "\n";
    return out.str();
}

std::uint64_t ConfigFile::hash() const {
    std::uint64_t h = 14695981039346656037ull;
    for (char c : canonical_text()) {
        h ^= std::uint64_t(static_cast<unsigned char>(c));
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ExperimentConfig ExperimentConfig::load(const ConfigFile& file, ExperimentKind kind) {
    ExperimentConfig c;
    c.kind = kind;
    c.seed = unsigned(file.integer_or("experiment", "seed", 1));
    c.output_dir = file.get_or("experiment", "output", "out");
    c.workers = int(file.integer_or("experiment", "workers", 1));
    c.verbosity = int(file.integer_or("experiment", "verbosity", 1));

    c.grid_n = int(file.integer_or("grid", "n", 32));
    c.l_over_2pi = file.number_or("grid", "l_over_2pi", 16.0);

    double mu = file.number_or("params", "mu", 1.0);
    double lambda = file.number_or("params", "lambda", 1.0);
    double kappa = file.number_or("params", "kappa", 1.0);
    double eps = file.number_or("params", "eps", 1.0);
    double omega = file.number_or("params", "omega", 0.0);
    double gamma = file.number_or("params", "gamma", 2.0);
    try {
        c.params = PhysParams(mu, lambda, kappa, eps, omega, PressureLaw(gamma));
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("config: [params] ") + e.what());
    }

    c.solver.h = file.number_or("solver", "h", 0.05);
    c.solver.horizon = file.number_or("solver", "horizon", 10.0);
    c.solver.density_floor = file.number_or("solver", "density_floor", 0.2);
    c.solver.window_eps_a = file.number_or("solver", "window_eps_a", 0.5);
    c.solver.c1 = file.number_or("solver", "c1", 1.0);
    c.solver.picard_tol = file.number_or("solver", "picard_tol", 1e-10);
    c.solver.picard_max_iters = int(file.integer_or("solver", "picard_max_iters", 14));
    c.solver.picard_ball = file.number_or("solver", "picard_ball", 1.0);
    c.solver.p = file.number_or("solver", "p", 2.0);
    c.solver.q = file.number_or("solver", "q", 8.0 / 3.0);
    c.solver.r = file.number_or("solver", "r", 8.0);
    c.solver.g_bound = file.number_or("solver", "g_bound", 4.0);
    c.solver.beta_factor = file.number_or("solver", "beta_factor", 16.0);
    c.solver.sample_stride = int(file.integer_or("solver", "sample_stride", 5));

    if (file.has("sweep", "omega")) c.sweep_omega = file.list("sweep", "omega");
    if (file.has("sweep", "eps")) c.sweep_eps = file.list("sweep", "eps");
    if (file.has("sweep", "j")) c.sweep_j = file.list("sweep", "j");
    if (file.has("sweep", "j_high")) c.sweep_j_high = file.list("sweep", "j_high");
    if (file.has("sweep", "pqr")) c.exponent_triple = file.list("sweep", "pqr");
    c.amplitude = file.number_or("sweep", "amplitude", 0.1);
    c.t_end = file.number_or("sweep", "t_end", 8.0);
    c.n_samples = int(file.integer_or("sweep", "n_samples", 48));

    // defaults shared with the acceptance suite
    c.thresholds["decay_margin"] = file.number_or("accept", "decay_margin", -1e-9);
    c.thresholds["energy_slope_tol"] = file.number_or("accept", "energy_slope_tol", 0.15);
    c.thresholds["strichartz_slope_tol"] = file.number_or("accept", "strichartz_slope_tol", 0.1);
    c.thresholds["lyapunov_lo"] = file.number_or("accept", "lyapunov_lo", 0.5);
    c.thresholds["lyapunov_hi"] = file.number_or("accept", "lyapunov_hi", 1.5);
    c.thresholds["bony_residual"] = file.number_or("accept", "bony_residual", 1e-10);
    c.thresholds["partition_defect"] = file.number_or("accept", "partition_defect", 1e-12);
    c.thresholds["estimate_refine_factor"] = file.number_or("accept", "estimate_refine_factor", 2.0);
    c.thresholds["picard_cross_rel"] = file.number_or("accept", "picard_cross_rel", 1e-6);
    c.thresholds["oracle_rel"] = file.number_or("accept", "oracle_rel", 1e-12);
    c.thresholds["midband_growth_tol"] = file.number_or("accept", "midband_growth_tol", 0.02);
    c.thresholds["estimate_samples"] = file.number_or("accept", "estimate_samples", 100);

    c.config_hash = file.hash();
    c.source_text = file.canonical_text();
    c.validate();
    return c;
}

void ExperimentConfig::validate() const {
    if (grid_n < 8 || grid_n % 2 != 0)
        throw std::invalid_argument("config: [grid] n must be even and >= 8");
    if (!(l_over_2pi > 0)) throw std::invalid_argument("config: [grid] l_over_2pi must be positive");
    params.validate();

    switch (kind) {
        case ExperimentKind::linear_decay:
            if (sweep_omega.empty())
                throw std::invalid_argument("config: [sweep] omega axis required for linear_decay");
            if (sweep_eps.empty())
                throw std::invalid_argument("config: [sweep] eps axis required for linear_decay");
            if (sweep_j.empty())
                throw std::invalid_argument("config: [sweep] j axis required for linear_decay");
            break;
        case ExperimentKind::energy_exponents:
            if (sweep_j.empty())
                throw std::invalid_argument("config: [sweep] j axis required for energy_exponents");
            break;
        case ExperimentKind::strichartz: {
            if (sweep_omega.empty())
                throw std::invalid_argument("config: [sweep] omega axis required for strichartz");
            if (exponent_triple.size() != 3)
                throw std::invalid_argument("config: [sweep] pqr must list p,q,r for strichartz");
            double p = exponent_triple[0], q = exponent_triple[1], r = exponent_triple[2];
            if (!(2.0 <= p && p <= q && q < p_inf))
                throw std::invalid_argument("config: strichartz requires 2 <= p <= q < inf");
            if (!(0.0 <= 1.0 / r && 1.0 / r <= 1.0 / p - 1.0 / q + 1e-12))
                throw std::invalid_argument(
                    "config: strichartz requires 0 <= 1/r <= 1/p - 1/q");
            break;
        }
        case ExperimentKind::estimate_constants:
            break;
        case ExperimentKind::picard:
            solver.validate();
            break;
        case ExperimentKind::phase_diagram:
            if (sweep_omega.empty() || sweep_eps.empty())
                throw std::invalid_argument(
                    "config: [sweep] omega and eps axes required for phase_diagram");
            solver.validate();
            break;
        case ExperimentKind::single_run:
            solver.validate();
            break;
    }
}

}  // namespace nskr
