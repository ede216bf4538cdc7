#pragma once

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "autobid/metrics.hpp"
#include "autobid/simulator.hpp"
#include "autobid/verify.hpp"

namespace autobid {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// The interchange unit: an instance plus the optional artifacts that ride
/// along with it (benchmark order, mu factors, a boost matrix).
struct InstanceBundle {
    ProblemInstance instance;
    std::optional<BenchmarkOrder> benchmark;
    std::optional<std::vector<double>> mu;
    std::optional<BoostMatrix> boosts;
};

inline Mechanism mechanism_from_string(const std::string& name) {
    if (name == "vcg") return Mechanism::Vcg;
    if (name == "gsp") return Mechanism::Gsp;
    if (name == "gsp-uniform-enforced") return Mechanism::GspUniformEnforced;
    if (name == "fpa-uniform-enforced") return Mechanism::FpaUniformEnforced;
    throw std::invalid_argument("unknown mechanism: " + name);
}

inline BoostScheme boost_scheme_from_string(const std::string& name) {
    if (name == "none") return BoostScheme::None;
    if (name == "uniform") return BoostScheme::Uniform;
    if (name == "benchmark") return BoostScheme::Benchmark;
    if (name == "custom") return BoostScheme::Custom;
    throw std::invalid_argument("unknown boost scheme: " + name);
}

inline json to_json(const ProblemInstance& inst) {
    json doc;
    doc["n"] = inst.num_bidders;
    doc["m"] = inst.num_auctions;
    doc["slots"] = inst.slots;
    doc["values"] = inst.values;
    doc["pos"] = inst.pos;
    json budgets = json::array();
    for (const auto& b : inst.budgets) {
        if (b.has_value())
            budgets.push_back(*b);
        else
            budgets.push_back(nullptr);
    }
    doc["budgets"] = budgets;
    if (!inst.seller_costs.empty()) doc["seller_costs"] = inst.seller_costs;
    return doc;
}

inline ProblemInstance instance_from_json(const json& doc) {
    ProblemInstance inst;
    inst.num_bidders = doc.at("n").get<int>();
    inst.num_auctions = doc.at("m").get<int>();
    inst.slots = doc.at("slots").get<std::vector<int>>();
    inst.values = doc.at("values").get<std::vector<std::vector<double>>>();
    inst.pos = doc.at("pos").get<std::vector<std::vector<double>>>();
    for (const auto& b : doc.at("budgets")) {
        if (b.is_null())
            inst.budgets.push_back(std::nullopt);
        else
            inst.budgets.push_back(b.get<double>());
    }
    if (doc.contains("seller_costs"))
        inst.seller_costs = doc.at("seller_costs").get<std::vector<std::vector<double>>>();
    const auto report = validate_instance(inst);
    if (!report.ok())
        throw std::invalid_argument("instance document invalid: " + report.violations.front());
    return inst;
}

inline json to_json(const BoostMatrix& boosts) {
    json doc;
    doc["scheme"] = to_string(boosts.scheme);
    doc["c"] = boosts.weight;
    doc["effective"] = boosts.effective;
    doc["z"] = boosts.z;
    return doc;
}

inline BoostMatrix boosts_from_json(const json& doc) {
    BoostMatrix boosts;
    boosts.scheme = boost_scheme_from_string(doc.at("scheme").get<std::string>());
    boosts.weight = doc.value("c", 0.0);
    boosts.effective = doc.value("effective", false);
    boosts.z = doc.at("z").get<std::vector<std::vector<double>>>();
    return boosts;
}

inline json to_json(const InstanceBundle& bundle) {
    json doc = to_json(bundle.instance);
    doc["schema_version"] = kSchemaVersion;
    if (bundle.benchmark) doc["benchmark"] = bundle.benchmark->ranking;
    if (bundle.mu) doc["mu"] = *bundle.mu;
    if (bundle.boosts) doc["boosts"] = to_json(*bundle.boosts);
    return doc;
}

inline InstanceBundle bundle_from_json(const json& doc) {
    InstanceBundle bundle;
    bundle.instance = instance_from_json(doc);
    if (doc.contains("benchmark")) {
        BenchmarkOrder order;
        order.ranking = doc.at("benchmark").get<std::vector<std::vector<int>>>();
        if (!is_valid_order(order, bundle.instance))
            throw std::invalid_argument("benchmark order in document is not a valid ranking");
        bundle.benchmark = std::move(order);
    }
    if (doc.contains("mu")) bundle.mu = doc.at("mu").get<std::vector<double>>();
    if (doc.contains("boosts")) bundle.boosts = boosts_from_json(doc.at("boosts"));
    return bundle;
}

inline json to_json(const AuctionOutcome& outcome) {
    json doc;
    doc["assignment"] = outcome.assignment;
    doc["payments"] = outcome.payments;
    json scores = json::array();
    for (const auto& ranking : outcome.rankings) {
        json row = json::array();
        for (const auto& rs : ranking) row.push_back(rs.score);
        scores.push_back(std::move(row));
    }
    doc["scores"] = scores;
    return doc;
}

inline json to_json(const CheckResult& result) {
    json doc;
    doc["status"] = result.status == CheckStatus::Pass   ? "pass"
                    : result.status == CheckStatus::Fail ? "fail"
                                                         : "skip";
    doc["achieved"] = result.achieved;
    doc["bound"] = result.bound;
    doc["slack"] = result.slack;
    doc["welfare"] = result.welfare;
    doc["baseline_welfare"] = result.baseline_welfare;
    if (!result.detail.empty()) doc["detail"] = result.detail;
    if (!result.alpha.empty()) doc["alpha"] = result.alpha;
    return doc;
}

inline json to_json(const CounterexampleBundle& bundle) {
    json doc;
    doc["instance"] = to_json(bundle.instance);
    doc["boosts"] = to_json(bundle.boosts);
    doc["alpha"] = bundle.alpha;
    doc["achieved"] = bundle.achieved;
    doc["bound"] = bundle.bound;
    doc["note"] = bundle.note;
    return doc;
}

// elapsed_seconds is intentionally not serialized: reports must be
// byte-identical across re-runs of the same config.
inline json to_json(const SuiteResult& result) {
    json doc;
    doc["name"] = result.name;
    doc["passed"] = result.passed;
    doc["instances"] = result.instances;
    doc["theta_samples"] = result.theta_samples;
    doc["skips"] = result.skips;
    doc["violations"] = result.violations;
    doc["oracle_checks"] = result.oracle_checks;
    if (std::isfinite(result.min_slack)) doc["min_slack"] = result.min_slack;
    doc["notes"] = result.notes;
    json bundles = json::array();
    for (const auto& bundle : result.counterexamples) bundles.push_back(to_json(bundle));
    doc["counterexamples"] = bundles;
    return doc;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string format_sig(double v, int digits = 6) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

/// Flat per-iteration export of a sweep: the shared pre-train rows first,
/// then each branch, one row per iteration.
inline std::string trace_csv(const SweepReport& report, int num_bidders) {
    std::ostringstream os;
    os << "iteration,phase,scheme";
    for (int i = 0; i < num_bidders; ++i) os << ",alpha_" << i;
    for (int i = 0; i < num_bidders; ++i) os << ",value_" << i;
    for (int i = 0; i < num_bidders; ++i) os << ",spend_" << i;
    for (int i = 0; i < num_bidders; ++i) os << ",target_" << i;
    for (int i = 0; i < num_bidders; ++i) os << ",feasible_" << i;
    os << ",welfare,revenue,normalized_welfare,normalized_revenue,in_theta,converged\n";

    const double ref_wel = report.baseline_welfare;
    const double ref_rev = report.baseline_revenue;
    auto emit = [&](const IterationRecord& rec, const std::string& label) {
        os << rec.iteration << ',' << rec.phase << ',' << label;
        for (double a : rec.alpha) os << ',' << format_double(a);
        for (double v : rec.ledger.value) os << ',' << format_double(v);
        for (double v : rec.ledger.spend) os << ',' << format_double(v);
        for (double v : rec.ledger.target) os << ',' << format_double(v);
        for (bool f : rec.feasible) os << ',' << (f ? 1 : 0);
        os << ',' << format_double(rec.welfare) << ',' << format_double(rec.revenue);
        os << ',' << format_double(ref_wel > 0.0 ? rec.welfare / ref_wel : 0.0);
        os << ',' << format_double(ref_rev > 0.0 ? rec.revenue / ref_rev : 0.0);
        os << ',' << (rec.in_theta ? 1 : 0) << ',' << (rec.converged ? 1 : 0) << '\n';
    };

    for (const auto& rec : report.pretrain_records) emit(rec, "pretrain");
    for (const auto& [spec, trace] : report.branches)
        for (const auto& rec : trace.records) emit(rec, spec.label());
    return os.str();
}

inline json to_json(const SweepRow& row) {
    json doc;
    doc["scheme"] = row.label;
    doc["first_welfare"] = row.first_welfare;
    doc["first_revenue"] = row.first_revenue;
    doc["final_welfare"] = row.final_welfare;
    doc["final_revenue"] = row.final_revenue;
    doc["converged"] = row.converged;
    doc["welfare_lift"] = row.welfare_lift;
    doc["revenue_lift"] = row.revenue_lift;
    doc["first_welfare_lift"] = row.first_welfare_lift;
    doc["first_revenue_lift"] = row.first_revenue_lift;
    return doc;
}

inline json to_json(const SweepReport& report) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["baseline_welfare"] = report.baseline_welfare;
    doc["baseline_revenue"] = report.baseline_revenue;
    json rows = json::array();
    for (const auto& row : report.rows) rows.push_back(to_json(row));
    doc["rows"] = rows;
    return doc;
}

/// Aligned lift table, percentages at 6 significant digits.
inline std::string format_lift_table(const std::vector<SweepRow>& rows) {
    std::vector<std::array<std::string, 3>> cells;
    cells.push_back({"scheme", "welfare", "revenue"});
    for (const auto& row : rows) {
        cells.push_back({row.label, format_sig(row.welfare_lift * 100.0) + "%",
                         format_sig(row.revenue_lift * 100.0) + "%"});
    }
    std::array<std::size_t, 3> width = {0, 0, 0};
    for (const auto& row : cells)
        for (int c = 0; c < 3; ++c) width[c] = std::max(width[c], row[c].size());
    std::ostringstream os;
    for (const auto& row : cells) {
        for (int c = 0; c < 3; ++c) {
            os << row[c];
            if (c < 2) os << std::string(width[c] - row[c].size() + 2, ' ');
        }
        os << '\n';
    }
    return os.str();
}

inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace autobid
