#include <CLI11.hpp>

#include <iostream>

#include "nskr/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"nskr: pseudospectral rotating Navier-Stokes-Korteweg toolkit"};
    app.require_subcommand(1);

    std::string config_path, output_override, report_dir;
    long seed_override = -1;
    int workers = 0, verbosity = -1;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config)
            sub->add_option("-c,--config", config_path, "configuration file")->required();
        sub->add_option("-o,--output", output_override, "output directory override");
        sub->add_option("-s,--seed", seed_override, "seed override");
        sub->add_option("-w,--workers", workers, "worker count");
        sub->add_option("-v,--verbosity", verbosity, "verbosity level");
    };

    std::vector<std::pair<CLI::App*, nskr::ExperimentKind>> experiment_subs;
    for (nskr::ExperimentKind kind :
         {nskr::ExperimentKind::linear_decay, nskr::ExperimentKind::energy_exponents,
          nskr::ExperimentKind::strichartz, nskr::ExperimentKind::estimate_constants,
          nskr::ExperimentKind::picard, nskr::ExperimentKind::phase_diagram,
          nskr::ExperimentKind::single_run}) {
        CLI::App* sub = app.add_subcommand(nskr::to_string(kind), "run this experiment");
        add_common(sub, true);
        experiment_subs.emplace_back(sub, kind);
    }
    CLI::App* validate = app.add_subcommand("validate", "check a configuration and exit");
    add_common(validate, true);
    std::string validate_kind = "single_run";
    validate->add_option("-k,--kind", validate_kind, "experiment kind to validate against");
    CLI::App* report = app.add_subcommand("report", "re-summarize an existing result directory");
    report->add_option("dir", report_dir, "result directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (report->parsed()) return nskr::report_results(report_dir);

        auto load = [&](nskr::ExperimentKind kind) {
            nskr::ConfigFile file = nskr::ConfigFile::parse_file(config_path);
            nskr::ExperimentConfig cfg = nskr::ExperimentConfig::load(file, kind);
            if (!output_override.empty()) cfg.output_dir = output_override;
            if (seed_override >= 0) cfg.seed = unsigned(seed_override);
            if (workers > 0) cfg.workers = workers;
            if (verbosity >= 0) cfg.verbosity = verbosity;
            return cfg;
        };

        if (validate->parsed()) {
            auto kind = nskr::experiment_kind_from(validate_kind);
            if (!kind) {
                std::cerr << "unknown experiment kind: " << validate_kind << "\n";
                return 2;
            }
            load(*kind);
            std::cout << "config ok\n";
            return 0;
        }
        for (auto& [sub, kind] : experiment_subs) {
            if (!sub->parsed()) continue;
            nskr::ExperimentConfig cfg = load(kind);
            nskr::ExperimentOutcome out = nskr::run_experiment(cfg);
            std::cout << "results: " << out.result_dir << "\n";
            std::cout << (out.all_checks_pass ? "all checks pass" : "some checks FAILED") << "\n";
            // a flagged outcome is a valid result; only configuration errors are nonzero
            return out.exit_code;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
