#ifndef NSKR_CONFIG_HPP
#define NSKR_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nskr/params.hpp"
#include "nskr/stepper.hpp"

namespace nskr {

enum class ExperimentKind {
    linear_decay,
    energy_exponents,
    strichartz,
    estimate_constants,
    picard,
    phase_diagram,
    single_run,
};
const char* to_string(ExperimentKind k);
std::optional<ExperimentKind> experiment_kind_from(const std::string& name);

// Flat sectioned key=value text; lists are comma-separated.
class ConfigFile {
  public:
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_text(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;
    double number(const std::string& section, const std::string& key) const;
    double number_or(const std::string& section, const std::string& key, double fallback) const;
    long integer_or(const std::string& section, const std::string& key, long fallback) const;
    std::vector<double> list(const std::string& section, const std::string& key) const;
    std::vector<double> list_or(const std::string& section, const std::string& key,
                                const std::vector<double>& fallback) const;

    std::string canonical_text() const;  // sorted section.key=value lines
    std::uint64_t hash() const;          // FNV-1a of the canonical text

  private:
    std::map<std::string, std::map<std::string, std::string>> data_;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::single_run;
    unsigned seed = 1;
    std::string output_dir = "out";
    int workers = 1;
    int verbosity = 1;

    int grid_n = 32;
    double l_over_2pi = 16.0;

    PhysParams params;
    SolverConfig solver;

    std::vector<double> sweep_omega;
    std::vector<double> sweep_eps;
    std::vector<double> sweep_j;
    std::vector<double> sweep_j_high;
    std::vector<double> exponent_triple;  // p, q, r for strichartz
    double amplitude = 0.1;
    double t_end = 8.0;
    int n_samples = 48;

    // acceptance-style thresholds (defaults mirror the acceptance suite)
    std::map<std::string, double> thresholds;

    std::uint64_t config_hash = 0;
    std::string source_text;

    // Throws std::invalid_argument naming the first violated field.
    static ExperimentConfig load(const ConfigFile& file, ExperimentKind kind);
    void validate() const;
};

std::string hash_hex(std::uint64_t h);

}  // namespace nskr

#endif
