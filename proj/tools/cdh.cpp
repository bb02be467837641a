#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cdh/cli/acceptance.hpp"
#include "cdh/cli/config.hpp"
#include "cdh/cli/csv.hpp"
#include "cdh/cli/experiments.hpp"
#include "cdh/cli/svg.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_config = 2;
constexpr int exit_solver = 3;

std::filesystem::path output_root(const cdh::cli::ExperimentConfig& cfg) {
    if (!cfg.output_dir.empty()) return cfg.output_dir;
    if (const char* env = std::getenv("CDH_OUTPUT_DIR"); env && *env) return env;
    return "cdh_out";
}

/// Applies "--key value" / "--key=value" pairs left over by the parser.
void apply_overrides(const std::vector<std::string>& args, cdh::cli::ExperimentConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) != 0 || a.size() == 2) throw cdh::cli::ConfigError(a, "expected --key value");
        const std::string body = a.substr(2);
        if (const auto eq = body.find('='); eq != std::string::npos) {
            pairs.emplace_back(body.substr(0, eq), body.substr(eq + 1));
        } else {
            if (i + 1 >= args.size()) throw cdh::cli::ConfigError(a, "missing value");
            pairs.emplace_back(body, args[++i]);
        }
    }
    // the family first, so its parameters validate against it
    for (const auto& [k, v] : pairs)
        if (k == "datum.family") cfg.set(k, v, "--" + k);
    for (const auto& [k, v] : pairs)
        if (k != "datum.family") cfg.set(k, v, "--" + k);
}

int run_experiment(const std::string& name, const std::string& config_file, const std::vector<std::string>& extras) {
    using namespace cdh::cli;
    const Experiment* exp = find_experiment(name);
    if (!exp) {
        std::cerr << "cdh: unknown experiment '" << name << "' (see `cdh list`)\n";
        return exit_config;
    }
    ExperimentConfig cfg;
    ExperimentOutput out;
    try {
        cfg = exp->defaults();
        if (!config_file.empty()) parse_config_text(read_file(config_file), cfg, config_file);
        apply_overrides(extras, cfg);
        if (cfg.experiment != name) throw ConfigError("experiment", "config names '" + cfg.experiment + "', not " + name);
        if (!cfg.times.geometric && cfg.times.list.empty()) throw ConfigError("times", "times list is empty");
    } catch (const ConfigError& e) {
        std::cerr << "cdh: config error: " << e.what() << '\n';
        return exit_config;
    }
    try {
        out = exp->run(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "cdh: config error: " << e.what() << '\n';
        return exit_config;
    } catch (const cdh::SolverError& e) {
        std::cerr << "cdh: solver error: " << e.what() << '\n';
        return exit_solver;
    } catch (const cdh::DomainError& e) {
        std::cerr << "cdh: invalid input for " << name << ": " << e.what() << '\n';
        return exit_config;
    } catch (const cdh::Unsupported& e) {
        std::cerr << "cdh: unsupported: " << e.what() << '\n';
        return exit_config;
    }
    const auto dir = output_root(cfg) / name;
    std::filesystem::create_directories(dir);
    write_series_csv(dir / "series.csv", out.series);
    write_summary_csv(dir / "summary.csv", out.summary);
    if (out.plot) write_svg(dir / "plot.svg", out.plot->first, out.plot->second);
    {
        std::ofstream cfg_out(dir / "config.txt");
        cfg_out << cfg.serialize();
    }
    for (const auto& r : out.summary)
        std::printf("%s %-40s %-14s %s\n", r.pass ? "PASS" : "FAIL", r.metric.c_str(), format_number(r.value).c_str(),
                    r.tolerance.c_str());
    std::printf("wrote %s\n", dir.string().c_str());
    return out.all_pass() ? exit_ok : exit_failure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radial diffusion with critical singular density: experiments and acceptance checks"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a named experiment");
    std::string experiment, config_file;
    run->add_option("experiment", experiment, "experiment name")->required();
    run->add_option("--config", config_file, "key=value config file");
    run->allow_extras();

    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    std::string filter;
    unsigned jobs = 1;
    verify->add_option("--filter", filter, "only criteria whose name contains this text");
    verify->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1u, 64u));

    app.add_subcommand("list", "list experiments and criteria");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    if (run->parsed()) return run_experiment(experiment, config_file, run->remaining());

    if (verify->parsed()) {
        const auto results = cdh::cli::run_acceptance(filter, jobs);
        if (results.empty()) {
            std::cerr << "cdh: no criterion matches '" << filter << "'\n";
            return exit_config;
        }
        int failed = 0;
        for (const auto& r : results) {
            std::printf("%s\n", cdh::cli::format_result(r).c_str());
            failed += r.pass ? 0 : 1;
        }
        std::printf("%zu/%zu criteria passed\n", results.size() - failed, results.size());
        return failed ? exit_failure : exit_ok;
    }

    std::printf("experiments:\n");
    for (const auto& e : cdh::cli::experiments()) std::printf("  %-22s %s\n", e.name.c_str(), e.description.c_str());
    std::printf("criteria:\n");
    for (const auto& c : cdh::cli::criteria()) std::printf("  %2d %s\n", c.id, c.name.c_str());
    return exit_ok;
}
