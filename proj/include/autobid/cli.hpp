#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "autobid/json_io.hpp"

namespace autobid {

/// Configuration or input errors; mapped to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace cli_detail {

inline json load_config(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const std::exception& e) {
        throw ConfigError("cannot parse " + path.string() + ": " + e.what());
    }
    if (doc.contains("schema_version") && doc.at("schema_version").get<int>() != kSchemaVersion)
        throw ConfigError("unsupported schema_version in " + path.string());
    return doc;
}

inline GeneratorParams generator_from_json(const json& doc) {
    GeneratorParams p;
    p.num_bidders = doc.value("num_bidders", p.num_bidders);
    p.num_auctions = doc.value("num_auctions", p.num_auctions);
    p.min_slots = doc.value("min_slots", p.min_slots);
    p.max_slots = doc.value("max_slots", p.max_slots);
    p.value_location = doc.value("value_location", p.value_location);
    p.value_scale = doc.value("value_scale", p.value_scale);
    p.bidder_location_spread = doc.value("bidder_location_spread", p.bidder_location_spread);
    p.position_decay = doc.value("position_decay", p.position_decay);
    p.budgeted_fraction = doc.value("budgeted_fraction", p.budgeted_fraction);
    p.mu_lo = doc.value("mu_lo", p.mu_lo);
    p.mu_hi = doc.value("mu_hi", p.mu_hi);
    return p;
}

inline ExperimentConfig experiment_from_json(const json& doc) {
    ExperimentConfig config;
    config.mechanism = mechanism_from_string(doc.value("mechanism", "vcg"));
    config.pretrain_iterations = doc.value("pretrain_iterations", config.pretrain_iterations);
    config.boosted_iterations = doc.value("boosted_iterations", config.boosted_iterations);
    if (doc.contains("learning_rate")) {
        const auto& lr = doc.at("learning_rate");
        config.learning.eta = lr.value("eta", config.learning.eta);
        config.learning.hold_iterations = lr.value("hold_iterations", config.learning.hold_iterations);
    }
    if (doc.contains("convergence")) {
        const auto& conv = doc.at("convergence");
        config.convergence.tol = conv.value("tol", config.convergence.tol);
        config.convergence.window = conv.value("window", config.convergence.window);
    }
    config.early_stop = doc.value("early_stop", false);
    if (!doc.contains("seed")) throw ConfigError("experiment config requires a seed");
    config.seed = doc.at("seed").get<std::uint64_t>();
    return config;
}

inline std::vector<BoostSchemeSpec> schemes_from_json(const json& doc) {
    std::vector<BoostSchemeSpec> schemes;
    for (const auto& item : doc) {
        BoostSchemeSpec spec;
        spec.kind = boost_scheme_from_string(item.at("kind").get<std::string>());
        spec.c = item.value("c", 0.0);
        if (spec.kind == BoostScheme::Custom)
            throw ConfigError("custom boosts cannot be configured as a sweep scheme");
        schemes.push_back(spec);
    }
    return schemes;
}

inline std::vector<std::filesystem::path> instance_files(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto& path = entry.path();
        if (path.extension() != ".json") continue;
        if (path.filename() == "manifest.json") continue;
        files.push_back(path);
    }
    std::sort(files.begin(), files.end());
    return files;
}

}  // namespace cli_detail

/// Writes `batch` seeded instance documents plus a manifest. Item seeds are
/// base seed + index; re-running with the same config rewrites identical
/// bytes.
inline int cmd_generate(const std::filesystem::path& config_path,
                        const std::filesystem::path& out_dir) {
    const json config = cli_detail::load_config(config_path);
    if (!config.contains("seed")) throw ConfigError("generate config requires a seed");
    const std::uint64_t base_seed = config.at("seed").get<std::uint64_t>();
    const int batch = config.value("batch", 1);
    if (batch < 1) throw ConfigError("batch must be >= 1");
    GeneratorParams params = cli_detail::generator_from_json(config.value("generator", json::object()));

    std::filesystem::create_directories(out_dir);
    json manifest;
    manifest["schema_version"] = kSchemaVersion;
    manifest["config"] = config;
    manifest["base_seed"] = base_seed;
    json items = json::array();
    for (int b = 0; b < batch; ++b) {
        const std::uint64_t item_seed = base_seed + static_cast<std::uint64_t>(b);
        params.seed = mix_seed(item_seed, 1);
        const ProblemInstance base = generate_instance(params);

        InstanceBundle bundle;
        json entry;
        if (params.budgeted_fraction > 0.0) {
            auto aug = assign_budgets_via_benchmark(base, params.budgeted_fraction, params.mu_lo,
                                                    params.mu_hi, mix_seed(item_seed, 2));
            entry["constrained"] = aug.constrained;
            bundle.instance = std::move(aug.instance);
            bundle.benchmark = std::move(aug.benchmark);
            bundle.mu = std::move(aug.mu);
        } else {
            bundle.instance = base;
            entry["constrained"] = json::array();
        }

        char name[32];
        std::snprintf(name, sizeof(name), "instance_%04d.json", b);
        write_file_atomic(out_dir / name, to_json(bundle).dump(2) + "\n");
        entry["file"] = name;
        entry["seed"] = item_seed;
        items.push_back(std::move(entry));
    }
    manifest["instances"] = items;
    write_file_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");
    std::cout << "wrote " << batch << " instance(s) to " << out_dir.string() << "\n";
    return 0;
}

/// Runs the configured sweep on every instance document in the directory,
/// writing a per-instance trace CSV and summary plus an aggregate summary
/// and a lift table.
inline int cmd_simulate(const std::filesystem::path& config_path,
                        const std::filesystem::path& instances_dir,
                        const std::filesystem::path& out_dir) {
    const json config = cli_detail::load_config(config_path);
    if (!config.contains("experiment")) throw ConfigError("simulate config requires 'experiment'");
    const ExperimentConfig experiment = cli_detail::experiment_from_json(config.at("experiment"));
    const std::vector<BoostSchemeSpec> schemes =
        cli_detail::schemes_from_json(config.at("experiment").value("schemes", json::array()));

    const auto files = cli_detail::instance_files(instances_dir);
    if (files.empty()) throw ConfigError("no instance documents in " + instances_dir.string());
    std::filesystem::create_directories(out_dir);

    json aggregate;
    aggregate["schema_version"] = kSchemaVersion;
    aggregate["config"] = config;
    json per_instance = json::array();

    std::map<std::string, std::array<double, 4>> totals;  // label -> lift sums
    std::vector<std::string> row_order;
    for (const auto& file : files) {
        InstanceBundle bundle;
        try {
            bundle = bundle_from_json(json::parse(read_file(file)));
        } catch (const std::exception& e) {
            throw ConfigError("cannot load instance " + file.string() + ": " + e.what());
        }
        const BenchmarkOrder* benchmark = bundle.benchmark ? &*bundle.benchmark : nullptr;
        for (const auto& spec : schemes) {
            if (spec.kind == BoostScheme::Benchmark && benchmark == nullptr)
                throw ConfigError("instance " + file.string() +
                                  " lacks the benchmark order required by a benchmark scheme");
        }

        const SweepReport report = run_sweep(bundle.instance, schemes, experiment, benchmark);
        const std::string stem = file.stem().string();
        write_file_atomic(out_dir / (stem + "_trace.csv"),
                          trace_csv(report, bundle.instance.num_bidders));
        json summary = to_json(report);
        summary["config"] = config;
        summary["instance_file"] = file.filename().string();
        write_file_atomic(out_dir / (stem + "_summary.json"), summary.dump(2) + "\n");

        json entry;
        entry["file"] = file.filename().string();
        entry["rows"] = to_json(report)["rows"];
        per_instance.push_back(std::move(entry));
        for (const auto& row : report.rows) {
            auto [it, inserted] = totals.try_emplace(row.label);
            if (inserted) row_order.push_back(row.label);
            (*it).second[0] += row.welfare_lift;
            (*it).second[1] += row.revenue_lift;
            (*it).second[2] += row.first_welfare_lift;
            (*it).second[3] += row.first_revenue_lift;
        }
    }

    const double count = static_cast<double>(files.size());
    json mean_rows = json::array();
    std::vector<SweepRow> table_rows;
    for (const auto& label : row_order) {
        const auto& sums = totals.at(label);
        json row;
        row["scheme"] = label;
        row["mean_welfare_lift"] = sums[0] / count;
        row["mean_revenue_lift"] = sums[1] / count;
        row["mean_first_welfare_lift"] = sums[2] / count;
        row["mean_first_revenue_lift"] = sums[3] / count;
        mean_rows.push_back(std::move(row));
        SweepRow table_row;
        table_row.label = label;
        table_row.welfare_lift = sums[0] / count;
        table_row.revenue_lift = sums[1] / count;
        table_rows.push_back(std::move(table_row));
    }
    aggregate["instances"] = per_instance;
    aggregate["mean_rows"] = mean_rows;
    write_file_atomic(out_dir / "summary.json", aggregate.dump(2) + "\n");
    write_file_atomic(out_dir / "table.txt", format_lift_table(table_rows));
    std::cout << "simulated " << files.size() << " instance(s); outputs in " << out_dir.string()
              << "\n";
    return 0;
}

struct VerifyOptions {
    std::vector<std::string> suites = {"fixtures", "value-bound", "benchmark-bound", "sandwich", "fpa",
                                       "trends"};
    std::optional<int> samples;
    std::optional<int> batch;
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> out;
};

/// Runs the selected property suites; exit code 1 iff any bound is violated.
inline int cmd_verify(const VerifyOptions& options) {
    std::vector<SuiteResult> results;
    for (const auto& name : options.suites) {
        if (name == "fixtures") {
            results.push_back(run_fixture_suite());
        } else if (name == "value-bound") {
            ValueBoostSuiteParams params;
            if (options.samples) params.samples = *options.samples;
            if (options.seed) params.seed = mix_seed(*options.seed, 3);
            results.push_back(run_value_boost_suite(params));
        } else if (name == "benchmark-bound") {
            BenchmarkBoostSuiteParams params;
            if (options.samples) params.samples = *options.samples;
            if (options.seed) params.seed = mix_seed(*options.seed, 5);
            results.push_back(run_benchmark_boost_suite(params));
        } else if (name == "sandwich") {
            SandwichSuiteParams params;
            if (options.samples) params.target_clearings = *options.samples;
            if (options.seed) params.seed = mix_seed(*options.seed, 6);
            results.push_back(run_sandwich_suite(params));
        } else if (name == "fpa") {
            FpaSuiteParams params;
            if (options.samples) params.samples = *options.samples;
            if (options.seed) params.seed = mix_seed(*options.seed, 8);
            results.push_back(run_fpa_suite(params));
        } else if (name == "trends") {
            TrendSuiteParams params;
            if (options.batch) params.batch = *options.batch;
            if (options.seed) params.seed = mix_seed(*options.seed, 10);
            results.push_back(run_trend_suite(params).suite);
        } else {
            throw ConfigError("unknown suite: " + name);
        }
    }

    bool all_passed = true;
    for (const auto& result : results) {
        all_passed = all_passed && result.passed;
        std::cout << (result.passed ? "[PASS] " : "[FAIL] ") << result.name << ": "
                  << result.instances << " instances, " << result.theta_samples
                  << " checked samples, " << result.violations << " violations";
        if (std::isfinite(result.min_slack)) std::cout << ", min slack " << result.min_slack;
        std::cout << " (" << format_sig(result.elapsed_seconds, 3) << " s)\n";
        for (const auto& note : result.notes) std::cout << "       " << note << "\n";
    }

    if (options.out) {
        json doc;
        doc["schema_version"] = kSchemaVersion;
        doc["passed"] = all_passed;
        json suites = json::array();
        for (const auto& result : results) suites.push_back(to_json(result));
        doc["suites"] = suites;
        write_file_atomic(*options.out, doc.dump(2) + "\n");
    }
    return all_passed ? 0 : 1;
}

inline int cmd_replay() {
    const FixtureReport report = replay_examples();
    for (const auto& check : report.checks) {
        std::cout << (check.pass ? "[PASS] " : "[FAIL] ") << check.name << ": expected "
                  << format_sig(check.expected, 15) << ", got " << format_sig(check.actual, 15)
                  << "\n";
    }
    std::cout << (report.all_pass() ? "all example checks passed\n"
                                    : "example checks FAILED\n");
    return report.all_pass() ? 0 : 1;
}

}  // namespace autobid
