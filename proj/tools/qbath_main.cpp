#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

#include "qbath/config.hpp"
#include "qbath/runner.hpp"
#include "qbath/types.hpp"

namespace {

enum ExitCode { kOk = 0, kDomainError = 1, kResourceError = 2 };

int dispatch(const std::string& mode, const std::string& path) {
    try {
        const qbath::ExperimentConfig cfg = qbath::load_config_file(path);
        std::string report;
        if (mode == "validate") {
            report = qbath::describe_config(cfg);
        } else if (mode == "oracle") {
            if (cfg.experiment != qbath::ExperimentKind::oracle_table)
                throw qbath::domain_error(
                    "oracle subcommand needs an oracle-table config (got '" +
                    std::string(qbath::experiment_name(cfg.experiment)) + "')");
            report = qbath::run_oracle_table(cfg);
        } else {
            if (cfg.experiment == qbath::ExperimentKind::oracle_table)
                throw qbath::domain_error("oracle-table configs go through the oracle subcommand");
            report = qbath::run_experiment(cfg);
        }
        std::fputs(report.c_str(), stdout);
        return kOk;
    } catch (const qbath::resource_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kResourceError;
    } catch (const qbath::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kDomainError;
    } catch (const std::exception& e) {
        // numerics_error and anything unforeseen: a failed run, not a bad config
        std::fprintf(stderr, "error: %s\n", e.what());
        return kDomainError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qubit + discretized-bath wavefunction and master-equation simulator"};
    app.require_subcommand(1);

    std::string run_cfg, oracle_cfg, validate_cfg;
    CLI::App* run = app.add_subcommand("run", "execute a simulation config");
    run->add_option("config", run_cfg, "JSON config file")->required();
    CLI::App* oracle = app.add_subcommand("oracle", "tabulate closed-form reference values");
    oracle->add_option("config", oracle_cfg, "JSON config file")->required();
    CLI::App* validate = app.add_subcommand("validate", "check a config without running it");
    validate->add_option("config", validate_cfg, "JSON config file")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return dispatch("run", run_cfg);
    if (oracle->parsed()) return dispatch("oracle", oracle_cfg);
    return dispatch("validate", validate_cfg);
}
