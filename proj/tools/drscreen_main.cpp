// Command-line front end: `run` executes a configured experiment grid,
// `synth` writes a synthetic screening cohort, `validate` audits a CSV.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "drscreen/config.hpp"
#include "drscreen/dataio.hpp"
#include "drscreen/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

bool is_data_error(const std::exception& e) {
    return dynamic_cast<const drscreen::ArityError*>(&e) ||
           dynamic_cast<const drscreen::RangeError*>(&e) ||
           dynamic_cast<const drscreen::NonFiniteError*>(&e) ||
           dynamic_cast<const drscreen::SchemaError*>(&e) ||
           dynamic_cast<const drscreen::ValueError*>(&e) ||
           dynamic_cast<const drscreen::EmptyFileError*>(&e) ||
           dynamic_cast<const drscreen::EmptyAfterFilterError*>(&e) ||
           dynamic_cast<const drscreen::TooFewSamplesError*>(&e) ||
           dynamic_cast<const drscreen::BadProportionsError*>(&e) ||
           dynamic_cast<const drscreen::EmptyClassError*>(&e) ||
           dynamic_cast<const drscreen::FoldError*>(&e) ||
           dynamic_cast<const drscreen::IoError*>(&e);
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides,
            std::size_t threads) {
    try {
        drscreen::ExperimentConfig config = drscreen::load_config_file(config_path, overrides);
        config.threads = threads;
        const drscreen::EvaluationReport report = drscreen::run_experiment(config);
        drscreen::emit_report(report, config);
        std::cout << config.out_dir.string() << "\n";
        return kExitOk;
    } catch (const drscreen::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        if (is_data_error(e)) {
            std::cerr << "data error: " << e.what() << "\n";
            return kExitData;
        }
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
}

int cmd_synth(std::uint64_t n, const std::vector<double>& proportions, double separation,
              std::uint64_t seed, const std::string& out) {
    try {
        drscreen::SynthParams params;
        params.n = static_cast<std::size_t>(n);
        if (proportions.size() != drscreen::kGradeCount) {
            throw drscreen::BadProportionsError("need exactly 4 proportions");
        }
        std::copy(proportions.begin(), proportions.end(), params.proportions.begin());
        params.separation = separation;
        params.seed = seed;
        const drscreen::Dataset data = drscreen::generate_synthetic(params);
        drscreen::write_csv(data, out);
        std::cout << out << "\n";
        return kExitOk;
    } catch (const drscreen::BadProportionsError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const drscreen::IoError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
}

int cmd_validate(const std::string& path) {
    const drscreen::CsvAudit audit = drscreen::audit_csv(path);
    if (audit.problems.empty()) {
        std::cout << "ok: " << audit.rows << " records\n";
        return kExitOk;
    }
    for (const std::string& problem : audit.problems) {
        std::cerr << path << ": " << problem << "\n";
    }
    return kExitData;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ensemble screening experiment harness"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a configured experiment grid");
    std::string config_path;
    std::vector<std::string> overrides;
    std::string search_mode;
    std::size_t threads = 0;
    run->add_option("--config", config_path, "experiment config (JSON)")->required();
    run->add_option("--override", overrides, "key=value config override (repeatable)");
    run->add_option("--search-mode", search_mode,
                    "single_pass (default) or iterative greedy search");
    run->add_option("--threads", threads, "worker cap; 0 = one per hardware thread");

    auto* synth = app.add_subcommand("synth", "generate a synthetic feature CSV");
    std::uint64_t n = 1200;
    std::vector<double> proportions(drscreen::kDefaultGradeProportions.begin(),
                                    drscreen::kDefaultGradeProportions.end());
    double separation = 1.0;
    std::uint64_t seed = 0;
    std::string out_path;
    synth->add_option("--n", n, "number of records");
    synth->add_option("--proportions", proportions, "grade proportions (4 values, sum 1)")
        ->expected(drscreen::kGradeCount);
    synth->add_option("--separation", separation, "grade separation of the feature means");
    synth->add_option("--seed", seed, "generator seed");
    synth->add_option("--out", out_path, "output CSV path")->required();

    auto* validate = app.add_subcommand("validate", "audit a feature CSV against the schema");
    std::string data_path;
    validate->add_option("--data", data_path, "CSV to check")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (run->parsed()) {
        if (!search_mode.empty()) overrides.push_back("search_mode=" + search_mode);
        return cmd_run(config_path, overrides, threads);
    }
    if (synth->parsed()) return cmd_synth(n, proportions, separation, seed, out_path);
    if (validate->parsed()) return cmd_validate(data_path);
    return kExitConfig;
}
