#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "autobid/rng.hpp"

namespace autobid {

/// A set of m position auctions contested by n budget/ROAS-constrained
/// bidders. values[i][j] is bidder i's base value in auction j; a win of
/// slot k is worth values[i][j] * pos[j][k]. Budgets are per-bidder;
/// nullopt means unbounded. seller_costs may be left empty for all-zero.
struct ProblemInstance {
    int num_bidders = 0;
    int num_auctions = 0;
    std::vector<int> slots;                       // per auction, s_j >= 1
    std::vector<std::vector<double>> values;      // [bidder][auction]
    std::vector<std::vector<double>> pos;         // [auction][slot], non-increasing
    std::vector<std::optional<double>> budgets;   // [bidder]
    std::vector<std::vector<double>> seller_costs;  // [bidder][auction] or empty

    double seller_cost(int i, int j) const {
        return seller_costs.empty() ? 0.0 : seller_costs[i][j];
    }

    /// Number of slots that actually get winners in auction j.
    int filled_slots(int j) const { return std::min(slots[j], num_bidders); }

    bool has_finite_budgets() const {
        for (const auto& b : budgets)
            if (b.has_value()) return true;
        return false;
    }
};

/// Convenience builder for single-slot instances with unit position
/// normalizers, the setting most hand-built cases live in.
inline ProblemInstance make_single_slot_instance(std::vector<std::vector<double>> values) {
    ProblemInstance inst;
    inst.num_bidders = static_cast<int>(values.size());
    inst.num_auctions = values.empty() ? 0 : static_cast<int>(values.front().size());
    inst.values = std::move(values);
    inst.slots.assign(inst.num_auctions, 1);
    inst.pos.assign(inst.num_auctions, {1.0});
    inst.budgets.assign(inst.num_bidders, std::nullopt);
    return inst;
}

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Checks every structural invariant; violations are reported as data with
/// 1-based indices, not thrown.
inline ValidationReport validate_instance(const ProblemInstance& inst) {
    ValidationReport report;
    auto fail = [&report](const std::string& message) { report.violations.push_back(message); };
    std::ostringstream os;

    const int n = inst.num_bidders;
    const int m = inst.num_auctions;
    if (n < 1) fail("num_bidders must be positive");
    if (m < 1) fail("num_auctions must be positive");
    if (static_cast<int>(inst.slots.size()) != m) fail("slots size mismatch");
    if (static_cast<int>(inst.values.size()) != n) fail("values row count mismatch");
    if (static_cast<int>(inst.pos.size()) != m) fail("pos row count mismatch");
    if (static_cast<int>(inst.budgets.size()) != n) fail("budgets size mismatch");
    if (!inst.seller_costs.empty() && static_cast<int>(inst.seller_costs.size()) != n)
        fail("seller_costs row count mismatch");
    if (!report.ok()) return report;  // dimension errors make index checks meaningless

    for (int j = 0; j < m; ++j) {
        if (inst.slots[j] < 1) {
            os.str("");
            os << "non-positive slot count at (j=" << j + 1 << ")";
            fail(os.str());
        }
        if (static_cast<int>(inst.pos[j].size()) != inst.slots[j]) {
            os.str("");
            os << "pos row length mismatch at (j=" << j + 1 << ")";
            fail(os.str());
            continue;
        }
        for (int k = 0; k < inst.slots[j]; ++k) {
            const double p = inst.pos[j][k];
            if (!(p > 0.0) || !std::isfinite(p)) {
                os.str("");
                os << "non-positive pos at (j=" << j + 1 << ",k=" << k + 1 << ")";
                fail(os.str());
            }
            if (k > 0 && inst.pos[j][k] > inst.pos[j][k - 1]) {
                os.str("");
                os << "pos increasing at (j=" << j + 1 << ",k=" << k + 1 << ")";
                fail(os.str());
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(inst.values[i].size()) != m) {
            os.str("");
            os << "values row length mismatch at (i=" << i + 1 << ")";
            fail(os.str());
            continue;
        }
        for (int j = 0; j < m; ++j) {
            const double v = inst.values[i][j];
            if (v < 0.0 || !std::isfinite(v)) {
                os.str("");
                os << "negative value at (i=" << i + 1 << ",j=" << j + 1 << ")";
                fail(os.str());
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        if (inst.budgets[i].has_value() && !(*inst.budgets[i] > 0.0)) {
            os.str("");
            os << "non-positive budget at (i=" << i + 1 << ")";
            fail(os.str());
        }
    }
    if (!inst.seller_costs.empty()) {
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(inst.seller_costs[i].size()) != m) {
                os.str("");
                os << "seller_costs row length mismatch at (i=" << i + 1 << ")";
                fail(os.str());
                continue;
            }
            for (int j = 0; j < m; ++j) {
                if (inst.seller_costs[i][j] < 0.0 || !std::isfinite(inst.seller_costs[i][j])) {
                    os.str("");
                    os << "negative seller cost at (i=" << i + 1 << ",j=" << j + 1 << ")";
                    fail(os.str());
                }
            }
        }
    }
    return report;
}

inline void require_valid(const ProblemInstance& inst) {
    const auto report = validate_instance(inst);
    if (!report.ok()) throw std::invalid_argument("invalid instance: " + report.violations.front());
}

/// Per-auction ranking of bidders; ranking[j][k] is the bidder holding rank k
/// (and thus slot k, when k < s_j) in auction j.
struct BenchmarkOrder {
    std::vector<std::vector<int>> ranking;
};

inline bool is_valid_order(const BenchmarkOrder& order, const ProblemInstance& inst) {
    if (static_cast<int>(order.ranking.size()) != inst.num_auctions) return false;
    for (const auto& perm : order.ranking) {
        if (static_cast<int>(perm.size()) != inst.num_bidders) return false;
        std::vector<bool> seen(inst.num_bidders, false);
        for (int b : perm) {
            if (b < 0 || b >= inst.num_bidders || seen[b]) return false;
            seen[b] = true;
        }
    }
    return true;
}

/// Ranks bidders in every auction by weight[i] * values[i][j], descending,
/// ties to the lower bidder index.
inline BenchmarkOrder rank_by_weighted_values(const ProblemInstance& inst,
                                              const std::vector<double>& weight) {
    if (static_cast<int>(weight.size()) != inst.num_bidders)
        throw std::invalid_argument("weight size mismatch");
    BenchmarkOrder order;
    order.ranking.resize(inst.num_auctions);
    for (int j = 0; j < inst.num_auctions; ++j) {
        auto& perm = order.ranking[j];
        perm.resize(inst.num_bidders);
        for (int i = 0; i < inst.num_bidders; ++i) perm[i] = i;
        std::sort(perm.begin(), perm.end(), [&](int a, int b) {
            const double sa = weight[a] * inst.values[a][j];
            const double sb = weight[b] * inst.values[b][j];
            if (sa != sb) return sa > sb;
            return a < b;
        });
    }
    return order;
}

/// Total position-weighted value bidder i receives under the allocation
/// induced by `order` (slot k of auction j to order.ranking[j][k]).
inline double benchmark_value(const ProblemInstance& inst, const BenchmarkOrder& order,
                              int bidder) {
    double total = 0.0;
    for (int j = 0; j < inst.num_auctions; ++j) {
        const int filled = inst.filled_slots(j);
        for (int k = 0; k < filled; ++k) {
            if (order.ranking[j][k] == bidder) total += inst.values[bidder][j] * inst.pos[j][k];
        }
    }
    return total;
}

struct GeneratorParams {
    int num_bidders = 6;
    int num_auctions = 30;
    int min_slots = 1;
    int max_slots = 3;
    double value_location = 0.0;        // log-normal location, common to all bidders
    double value_scale = 1.0;           // log-normal scale
    double bidder_location_spread = 0.0;  // per-bidder location shift ~ U(-spread, spread)
    double position_decay = 0.7;        // pos[j][k] = decay^k
    double budgeted_fraction = 0.0;     // rho, consumed by assign_budgets_via_benchmark
    double mu_lo = 0.4;
    double mu_hi = 0.9;
    std::uint64_t seed = 0;
};

inline void validate_params(const GeneratorParams& p) {
    if (p.num_bidders < 1) throw std::invalid_argument("num_bidders must be positive");
    if (p.num_auctions < 1) throw std::invalid_argument("num_auctions must be positive");
    if (p.min_slots < 1 || p.max_slots < p.min_slots)
        throw std::invalid_argument("invalid slot bounds");
    if (!(p.position_decay > 0.0 && p.position_decay <= 1.0))
        throw std::invalid_argument("position_decay must be in (0, 1]");
    if (!(p.value_scale >= 0.0)) throw std::invalid_argument("value_scale must be non-negative");
    if (!(p.bidder_location_spread >= 0.0))
        throw std::invalid_argument("bidder_location_spread must be non-negative");
    if (!(p.budgeted_fraction >= 0.0 && p.budgeted_fraction <= 1.0))
        throw std::invalid_argument("budgeted_fraction must be in [0, 1]");
    if (std::lround(p.budgeted_fraction * p.num_bidders) > 0 &&
        !(p.mu_lo > 0.0 && p.mu_lo < p.mu_hi && p.mu_hi < 1.0))
        throw std::invalid_argument("mu range must satisfy 0 < mu_lo < mu_hi < 1");
}

/// Draws a synthetic instance. The whole draw order (bidder shifts, slot
/// counts, then values bidder-major) is part of the determinism contract:
/// the same params always produce the bit-identical instance. Budgets are
/// left unbounded here; use assign_budgets_via_benchmark for the budgeted
/// augmentation.
inline ProblemInstance generate_instance(const GeneratorParams& params) {
    validate_params(params);
    Rng rng(params.seed);

    const int n = params.num_bidders;
    const int m = params.num_auctions;
    ProblemInstance inst;
    inst.num_bidders = n;
    inst.num_auctions = m;

    std::vector<double> location(n);
    for (int i = 0; i < n; ++i) {
        location[i] = params.value_location +
                      rng.uniform(-params.bidder_location_spread, params.bidder_location_spread);
    }
    inst.slots.resize(m);
    for (int j = 0; j < m; ++j) inst.slots[j] = rng.uniform_int(params.min_slots, params.max_slots);

    inst.values.assign(n, std::vector<double>(m));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) inst.values[i][j] = rng.lognormal(location[i], params.value_scale);

    inst.pos.resize(m);
    for (int j = 0; j < m; ++j) {
        inst.pos[j].resize(inst.slots[j]);
        for (int k = 0; k < inst.slots[j]; ++k) inst.pos[j][k] = std::pow(params.position_decay, k);
    }
    inst.budgets.assign(n, std::nullopt);
    return inst;
}

struct BudgetAugmentation {
    ProblemInstance instance;
    BenchmarkOrder benchmark;
    std::vector<double> mu;        // 1.0 for unconstrained bidders
    std::vector<int> constrained;  // sorted bidder indices
};

/// Marks a rho-fraction of bidders budget-constrained with a random factor
/// mu_i, ranks every auction by mu_i * v_{i,j}, and sets each constrained
/// bidder's budget to her total value under that benchmark allocation. The
/// construction makes the benchmark allocation optimal for liquid welfare:
/// mu_i acts as one minus the Lagrange multiplier of the budget constraint.
/// Constrained bidders that receive no benchmark value are demoted back to
/// unconstrained (a zero budget would be invalid), re-ranking until stable.
inline BudgetAugmentation assign_budgets_via_benchmark(const ProblemInstance& base, double rho,
                                                       double mu_lo, double mu_hi,
                                                       std::uint64_t seed) {
    require_valid(base);
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must be in [0, 1]");
    const int n = base.num_bidders;
    const int count = static_cast<int>(std::lround(rho * n));
    if (count > 0 && !(mu_lo > 0.0 && mu_lo < mu_hi && mu_hi < 1.0))
        throw std::invalid_argument("mu range must satisfy 0 < mu_lo < mu_hi < 1");

    Rng rng(seed);
    BudgetAugmentation out;
    out.instance = base;
    out.mu.assign(n, 1.0);
    std::vector<bool> constrained(n, false);
    for (int i : rng.sample_indices(n, count)) constrained[i] = true;
    for (int i = 0; i < n; ++i) {
        if (constrained[i]) out.mu[i] = rng.uniform(mu_lo, mu_hi);
    }

    for (;;) {
        out.benchmark = rank_by_weighted_values(base, out.mu);
        bool demoted = false;
        for (int i = 0; i < n; ++i) {
            if (!constrained[i]) continue;
            if (benchmark_value(base, out.benchmark, i) <= 0.0) {
                constrained[i] = false;
                out.mu[i] = 1.0;
                demoted = true;
            }
        }
        if (!demoted) break;
    }

    for (int i = 0; i < n; ++i) {
        if (constrained[i]) {
            out.instance.budgets[i] = benchmark_value(base, out.benchmark, i);
            out.constrained.push_back(i);
        } else {
            out.instance.budgets[i] = std::nullopt;
        }
    }
    return out;
}

}  // namespace autobid
