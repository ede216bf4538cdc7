#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "autobid/auction.hpp"
#include "autobid/bidder.hpp"
#include "autobid/boosts.hpp"
#include "autobid/instance.hpp"

namespace autobid {

inline std::vector<double> allocated_values(const ProblemInstance& inst,
                                            const SlotAssignment& assignment) {
    std::vector<double> value(inst.num_bidders, 0.0);
    for (int j = 0; j < inst.num_auctions; ++j) {
        const auto& winners = assignment[j];
        for (int k = 0; k < static_cast<int>(winners.size()); ++k) {
            const int i = winners[k];
            if (i >= 0) value[i] += inst.values[i][j] * inst.pos[j][k];
        }
    }
    return value;
}

/// Liquid welfare: sum over bidders of min(budget, received value).
inline double liquid_welfare(const ProblemInstance& inst, const SlotAssignment& assignment) {
    const auto value = allocated_values(inst, assignment);
    double total = 0.0;
    for (int i = 0; i < inst.num_bidders; ++i) {
        const double cap = inst.budgets[i].value_or(std::numeric_limits<double>::infinity());
        total += std::min(cap, value[i]);
    }
    return total;
}

inline double liquid_welfare(const ProblemInstance& inst, const AuctionOutcome& outcome) {
    return liquid_welfare(inst, outcome.assignment);
}

inline double revenue(const AuctionOutcome& outcome) {
    double total = 0.0;
    for (const auto& row : outcome.payments)
        for (double p : row) total += p;
    return total;
}

struct OptimalAllocation {
    double welfare = 0.0;
    SlotAssignment assignment;
};

/// Without budgets the welfare objective separates per auction, and sorting
/// bidders by value against the non-increasing position curve is optimal.
/// Rejects budgeted instances.
inline OptimalAllocation optimal_welfare_no_budget(const ProblemInstance& inst) {
    if (inst.has_finite_budgets())
        throw std::invalid_argument("optimal_welfare_no_budget requires unbounded budgets");
    OptimalAllocation out;
    out.assignment.resize(inst.num_auctions);
    std::vector<int> idx(inst.num_bidders);
    for (int j = 0; j < inst.num_auctions; ++j) {
        for (int i = 0; i < inst.num_bidders; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            if (inst.values[a][j] != inst.values[b][j]) return inst.values[a][j] > inst.values[b][j];
            return a < b;
        });
        const int filled = inst.filled_slots(j);
        out.assignment[j].assign(idx.begin(), idx.begin() + filled);
        for (int k = 0; k < filled; ++k) out.welfare += inst.values[idx[k]][j] * inst.pos[j][k];
    }
    return out;
}

namespace detail {

// All ordered picks of `length` distinct bidders out of n.
inline std::vector<std::vector<int>> enumerate_slates(int n, int length) {
    std::vector<std::vector<int>> slates;
    std::vector<int> current;
    std::vector<bool> used(n, false);
    auto recurse = [&](auto&& self, int depth) -> void {
        if (depth == length) {
            slates.push_back(current);
            return;
        }
        for (int i = 0; i < n; ++i) {
            if (used[i]) continue;
            used[i] = true;
            current.push_back(i);
            self(self, depth + 1);
            current.pop_back();
            used[i] = false;
        }
    };
    recurse(recurse, 0);
    return slates;
}

}  // namespace detail

/// Exact maximum liquid welfare by exhaustive enumeration of all joint slot
/// assignments (every slot filled; leaving a slot empty never helps liquid
/// welfare). Intended as the independent test oracle for small instances;
/// refuses instances whose joint assignment count exceeds size_cap.
inline double optimal_liquid_welfare_bruteforce(const ProblemInstance& inst,
                                                std::uint64_t size_cap = 2'000'000) {
    require_valid(inst);
    const int n = inst.num_bidders;
    const int m = inst.num_auctions;

    double combinations = 1.0;
    std::vector<std::vector<std::vector<int>>> slates(m);
    for (int j = 0; j < m; ++j) {
        slates[j] = detail::enumerate_slates(n, inst.filled_slots(j));
        combinations *= static_cast<double>(slates[j].size());
        if (combinations > static_cast<double>(size_cap))
            throw std::invalid_argument("instance too large for brute-force enumeration");
    }

    std::vector<std::size_t> pick(m, 0);
    std::vector<double> value(n);
    double best = 0.0;
    for (;;) {
        std::fill(value.begin(), value.end(), 0.0);
        for (int j = 0; j < m; ++j) {
            const auto& slate = slates[j][pick[j]];
            for (int k = 0; k < static_cast<int>(slate.size()); ++k)
                value[slate[k]] += inst.values[slate[k]][j] * inst.pos[j][k];
        }
        double welfare = 0.0;
        for (int i = 0; i < n; ++i) {
            const double cap = inst.budgets[i].value_or(std::numeric_limits<double>::infinity());
            welfare += std::min(cap, value[i]);
        }
        best = std::max(best, welfare);

        int j = 0;
        while (j < m && ++pick[j] == slates[j].size()) {
            pick[j] = 0;
            ++j;
        }
        if (j == m) break;
    }
    return best;
}

/// Liquid welfare of the allocation induced by a fixed per-auction ranking.
inline double benchmark_welfare(const ProblemInstance& inst, const BenchmarkOrder& order) {
    if (!is_valid_order(order, inst)) throw std::invalid_argument("benchmark order mismatch");
    double total = 0.0;
    for (int i = 0; i < inst.num_bidders; ++i) {
        const double cap = inst.budgets[i].value_or(std::numeric_limits<double>::infinity());
        total += std::min(cap, benchmark_value(inst, order, i));
    }
    return total;
}

struct WelfareReport {
    double liquid_welfare = 0.0;
    double revenue = 0.0;
    std::vector<double> capped_values;  // per bidder min(budget, value)
    std::optional<double> optimal_welfare;
    std::optional<double> competitive_ratio;
};

inline WelfareReport make_welfare_report(const ProblemInstance& inst,
                                         const AuctionOutcome& outcome,
                                         std::optional<double> optimal = std::nullopt) {
    WelfareReport report;
    const auto value = allocated_values(inst, outcome.assignment);
    report.capped_values.resize(inst.num_bidders);
    for (int i = 0; i < inst.num_bidders; ++i) {
        const double cap = inst.budgets[i].value_or(std::numeric_limits<double>::infinity());
        report.capped_values[i] = std::min(cap, value[i]);
        report.liquid_welfare += report.capped_values[i];
    }
    report.revenue = revenue(outcome);
    report.optimal_welfare = optimal;
    if (optimal && *optimal > 0.0) report.competitive_ratio = report.liquid_welfare / *optimal;
    return report;
}

enum class BaselineKind { OptNoBudget, Benchmark };

struct RatioBaseline {
    BaselineKind kind = BaselineKind::OptNoBudget;
    const BenchmarkOrder* order = nullptr;  // required for Benchmark
};

enum class CheckStatus { Pass, Fail, Skip };

struct CheckResult {
    CheckStatus status = CheckStatus::Skip;
    double achieved = 0.0;
    double bound = 0.0;
    double slack = 0.0;
    double welfare = 0.0;
    double baseline_welfare = 0.0;
    std::string detail;
    std::vector<double> alpha;  // captured on failure for regression bundles
};

enum class BoostRequirement { None, ValueCompetitive, BenchmarkCompetitive };

struct RatioCheckOptions {
    double tol = 1e-9;
    double theta_tol = 1e-9;
    BoostRequirement requirement = BoostRequirement::None;
    double competitive_c = 0.0;
    const BenchmarkOrder* order = nullptr;  // for BenchmarkCompetitive
};

/// Executable form of the welfare approximation guarantees: clears the
/// auctions at `profile` and asserts Wel / baseline >= bound - tol.
/// Precondition violations (profile outside Theta, boosts failing their
/// competitiveness requirement, wrong baseline for the instance) come back
/// as skips, not failures.
inline CheckResult check_ratio_bound(const ProblemInstance& inst, Mechanism mech,
                                     const BoostMatrix& boosts, const MultiplierProfile& profile,
                                     const RatioBaseline& baseline, double bound,
                                     const RatioCheckOptions& opts = {}) {
    CheckResult result;
    result.bound = bound;

    if (opts.requirement == BoostRequirement::ValueCompetitive) {
        if (!is_value_competitive(boosts, inst, opts.competitive_c).ok) {
            result.detail = "boosts are not value-competitive at the required weight";
            return result;
        }
    } else if (opts.requirement == BoostRequirement::BenchmarkCompetitive) {
        if (opts.order == nullptr) throw std::invalid_argument("benchmark requirement needs order");
        if (!is_benchmark_competitive(boosts, inst, *opts.order, opts.competitive_c).ok) {
            result.detail = "boosts are not benchmark-competitive at the required weight";
            return result;
        }
    }

    const auto classification = classify_profile(inst, mech, boosts, profile, opts.theta_tol);
    if (!classification.in_theta) {
        result.detail = "profile is not in Theta";
        return result;
    }

    double base;
    if (baseline.kind == BaselineKind::OptNoBudget) {
        if (inst.has_finite_budgets()) {
            result.detail = "OptNoBudget baseline requires unbounded budgets";
            return result;
        }
        base = optimal_welfare_no_budget(inst).welfare;
    } else {
        if (baseline.order == nullptr) throw std::invalid_argument("Benchmark baseline needs order");
        base = benchmark_welfare(inst, *baseline.order);
    }

    result.welfare = liquid_welfare(inst, classification.outcome);
    result.baseline_welfare = base;
    result.achieved = base > 0.0 ? result.welfare / base : 1.0;
    result.slack = result.achieved - bound;
    if (result.achieved >= bound - opts.tol) {
        result.status = CheckStatus::Pass;
    } else {
        result.status = CheckStatus::Fail;
        result.alpha = profile.alpha;
        result.detail = "welfare ratio below bound";
    }
    return result;
}

}  // namespace autobid
