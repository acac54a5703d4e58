#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "cltlab/experiments.hpp"

namespace {

namespace fs = std::filesystem;

// Exit codes: 0 success, 2 assertion failure, 3 configuration or model error,
// 4 size-cap error, 1 anything unexpected.
constexpr int kExitAssertions = 2;
constexpr int kExitConfig = 3;
constexpr int kExitSize = 4;

std::string resolve_out_dir(const std::string& cli_out, const cltlab::Config& config) {
    if (!cli_out.empty()) return cli_out;
    const std::string from_config = config.get_or<std::string>("output.dir", "");
    if (!from_config.empty()) return from_config;
    if (const char* env = std::getenv("CLTLAB_OUT"); env && *env) return env;
    return ".";
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw cltlab::ConfigError("cannot write '" + path.string() + "'");
    out << content;
}

int command_run(const std::string& config_path, const std::vector<std::string>& overrides,
                const std::string& out_dir_flag, int workers_flag) {
    cltlab::Config config = cltlab::Config::from_file(config_path);
    for (const std::string& assignment : overrides) config.apply_override(assignment);

    const std::vector<std::string> problems = cltlab::validate_config(config);
    if (!problems.empty()) {
        for (const std::string& p : problems) std::cerr << "error: " << p << "\n";
        return kExitConfig;
    }

    cltlab::RunOverrides run_overrides;
    if (workers_flag > 0) run_overrides.workers = workers_flag;
    const cltlab::ExperimentOutcome outcome = cltlab::run_config(config, run_overrides);

    const fs::path dir = resolve_out_dir(out_dir_flag, config);
    fs::create_directories(dir);
    const fs::path json_path = dir / config.get_or<std::string>("output.json", "report.json");
    const fs::path csv_path = dir / config.get_or<std::string>("output.csv", "report.csv");
    write_file(json_path, outcome.report.dump(2) + "\n");
    write_file(csv_path, outcome.csv);

    std::cout << outcome.summary;
    std::cout << "reports: " << json_path.string() << ", " << csv_path.string() << "\n";
    if (!outcome.assertions_ok) {
        std::cerr << "error: assertions failed (see the report rows)\n";
        return kExitAssertions;
    }
    return 0;
}

int command_validate(const std::string& config_path, const std::vector<std::string>& overrides) {
    cltlab::Config config = cltlab::Config::from_file(config_path);
    for (const std::string& assignment : overrides) config.apply_override(assignment);
    const std::vector<std::string> problems = cltlab::validate_config(config);
    if (problems.empty()) {
        std::cout << "ok: " << config_path << "\n";
        return 0;
    }
    for (const std::string& p : problems) std::cerr << "error: " << p << "\n";
    return kExitConfig;
}

int command_list() {
    for (const cltlab::ExperimentInfo& info : cltlab::experiment_registry()) {
        std::cout << info.name << "\n  " << info.summary << "\n  required keys:";
        for (const std::string& key : info.required_keys) std::cout << " " << key;
        std::cout << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cltlab: moment calculus, separation certificates and Monte Carlo CLT checks "
                 "for weakly dependent random fields"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;
    int workers = 0;

    CLI::App* run = app.add_subcommand("run", "run the experiment described by a config file");
    run->add_option("config", config_path, "JSON config file")->required();
    run->add_option("--set", overrides, "override a dotted config key, e.g. clt.replications=500");
    run->add_option("--out", out_dir, "output directory (overrides output.dir and CLTLAB_OUT)");
    run->add_option("--workers", workers, "worker threads (must not change any result)");

    CLI::App* validate = app.add_subcommand("validate", "check a config file without running");
    validate->add_option("config", config_path, "JSON config file")->required();
    validate->add_option("--set", overrides, "override a dotted config key");

    app.add_subcommand("list", "list the experiment kinds and their required keys");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return command_run(config_path, overrides, out_dir, workers);
        if (validate->parsed()) return command_validate(config_path, overrides);
        return command_list();
    } catch (const cltlab::SizeError& e) {
        std::cerr << "size error: " << e.what() << "\n";
        return kExitSize;
    } catch (const cltlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
