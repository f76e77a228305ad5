#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "decolab/runner/compare.hpp"
#include "decolab/runner/config.hpp"
#include "decolab/runner/experiments.hpp"
#include "decolab/version.hpp"

namespace {

constexpr const char* kArtifactHelp = R"(Artifacts (CSV: header row, shortest round-trip decimals):
  spin-fidelity   fidelity.csv        t, F
                  report.json         mean, variance, sigma [, gaussian_deviation]
  hmh-check       hmh.json            n_values, sigma_sq, c_lower, local_bound, passed
  dicke-analytic  fidelity.csv        t, F_analytic, F_gaussian [, F_oracle]
                  report.json         sigma_effective, sigma_formula, variance_full_dicke, ...
  dicke-oracle    fidelity.csv        t, F_oracle [, F_full_dicke]
                  report.json         n_max, doublings, variance_effective, ...
  scaling         scaling.json        n_values, sigma_fit, exponent, exponent_stderr, r_squared
                  peaks.csv (dicke)   n, k, t, height, width
  periodogram     samples.csv         index, sample
                  periodogram.csv     freq_hz, power
                  report.json         peak_freq_hz, peak_power, median_power, peak_over_median_db
  rng-demo        uniform.csv         index, u
                  uniformity.json     chi2, dof, p_value, bins, counts, passed
Every run also writes manifest.json (config echo, versions, wall time).

Exit codes: 0 ok, 1 compare tolerance exceeded or I/O failure, 2 validation,
3 capacity refusal, 4 non-convergence. Errors are printed to stderr as JSON.
Environment: DECOLAB_THREADS sets the number of sweep workers (default 1).)";

int fail(std::exception_ptr e) {
    const auto err = decolab::runner::error_json(e);
    std::cerr << err.dump() << '\n';
    return err["exit_code"].get<int>();
}

}  // namespace

int main(int argc, char** argv) {
    using namespace decolab::runner;
    CLI::App app{"decolab: fidelity decay, Dicke survival amplitudes and sampling demos"};
    app.footer(kArtifactHelp);
    app.set_version_flag("--version", decolab::kVersion);
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "Run one experiment from a JSON config");
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    run_cmd->add_option("--config", config_path, "Experiment config (JSON)")->required();
    run_cmd->add_option("--set", overrides, "Override a field: key=value (value parsed as JSON)");
    run_cmd->add_option("--out", out_dir, "Output directory (overrides output_dir)");

    auto* cmp_cmd = app.add_subcommand("compare", "Diff the CSV artifacts of two runs");
    std::string run_a, run_b;
    double tol = 0.0;
    cmp_cmd->add_option("a", run_a, "First run (manifest.json or its directory)")->required();
    cmp_cmd->add_option("b", run_b, "Second run")->required();
    cmp_cmd->add_option("--tol", tol, "Max allowed absolute difference")->required();

    auto* val_cmd = app.add_subcommand("validate", "Check a run's artifacts against their schemas");
    std::string manifest;
    val_cmd->add_option("manifest", manifest, "manifest.json or its directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : ExitCode::validation;
    }

    if (*run_cmd) {
        ExperimentConfig cfg;
        try {
            std::optional<std::filesystem::path> out;
            if (!out_dir.empty()) out = out_dir;
            cfg = parse_config(load_json_file(config_path), overrides, out);
        } catch (...) {
            return fail(std::current_exception());
        }
        const RunOutcome r = run(cfg);
        if (r.exit_code != ExitCode::ok) {
            std::cerr << r.error.dump() << '\n';
            return r.exit_code;
        }
        std::cout << r.manifest.string() << '\n';
        return 0;
    }
    if (*cmp_cmd) {
        try {
            const CompareReport rep = compare(run_a, run_b, tol);
            std::cout << rep.to_json().dump(2) << '\n';
            return rep.passed ? 0 : ExitCode::failure;
        } catch (...) {
            return fail(std::current_exception());
        }
    }
    try {
        const std::size_t n = validate_artifacts(manifest);
        std::cout << json{{"status", "ok"}, {"artifacts_checked", n}}.dump() << '\n';
        return 0;
    } catch (...) {
        return fail(std::current_exception());
    }
}
