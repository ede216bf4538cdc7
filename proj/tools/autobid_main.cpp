#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "autobid/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"position-auction simulator with additive boosts for auto-bidding"};
    app.require_subcommand(1);

    std::string config_path;
    std::string instances_dir;
    std::string out_dir;

    auto* generate = app.add_subcommand("generate", "generate seeded instance files");
    generate->add_option("--config", config_path, "generator config JSON")
        ->required()
        ->check(CLI::ExistingFile);
    generate->add_option("--out", out_dir, "output directory")->required();

    auto* simulate = app.add_subcommand("simulate", "run boost sweeps over instance files");
    simulate->add_option("--config", config_path, "experiment config JSON")
        ->required()
        ->check(CLI::ExistingFile);
    simulate->add_option("--instances", instances_dir, "directory of instance documents")
        ->required()
        ->check(CLI::ExistingDirectory);
    simulate->add_option("--out", out_dir, "output directory")->required();

    autobid::VerifyOptions verify_options;
    std::string suites_csv;
    std::int64_t samples = -1;
    std::int64_t batch = -1;
    std::int64_t seed = -1;
    std::string report_path;
    auto* verify = app.add_subcommand("verify", "run the welfare-bound property suites");
    verify->add_option("--suites", suites_csv,
                       "comma-separated: fixtures,value-bound,benchmark-bound,sandwich,fpa,trends");
    verify->add_option("--samples", samples, "sample count override");
    verify->add_option("--batch", batch, "trend-suite batch override");
    verify->add_option("--seed", seed, "base seed override");
    verify->add_option("--out", report_path, "write the JSON report here");

    auto* replay = app.add_subcommand("replay-examples", "replay the worked examples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (generate->parsed()) return autobid::cmd_generate(config_path, out_dir);
        if (simulate->parsed()) return autobid::cmd_simulate(config_path, instances_dir, out_dir);
        if (replay->parsed()) return autobid::cmd_replay();
        if (verify->parsed()) {
            if (verify->count("--suites") > 0) {
                // an explicitly empty selection runs nothing and passes
                verify_options.suites.clear();
                std::string item;
                for (char ch : suites_csv + ",") {
                    if (ch == ',') {
                        if (!item.empty()) verify_options.suites.push_back(item);
                        item.clear();
                    } else {
                        item += ch;
                    }
                }
            }
            if (samples >= 0) verify_options.samples = static_cast<int>(samples);
            if (batch >= 0) verify_options.batch = static_cast<int>(batch);
            if (seed >= 0) verify_options.seed = static_cast<std::uint64_t>(seed);
            if (!report_path.empty()) verify_options.out = report_path;
            return autobid::cmd_verify(verify_options);
        }
    } catch (const autobid::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
