#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "autobid/instance.hpp"

namespace autobid {

enum class BoostScheme { None, Uniform, Benchmark, Custom };

inline const char* to_string(BoostScheme scheme) {
    switch (scheme) {
        case BoostScheme::None: return "none";
        case BoostScheme::Uniform: return "uniform";
        case BoostScheme::Benchmark: return "benchmark";
        case BoostScheme::Custom: return "custom";
    }
    return "unknown";
}

/// Per-bidder per-auction additive boosts. Raw boosts are non-negative;
/// once seller costs have been subtracted (`effective` set) entries may be
/// negative and the matrix can no longer be fed to the competitiveness
/// verifiers, which are defined on raw boosts only.
struct BoostMatrix {
    std::vector<std::vector<double>> z;  // [bidder][auction]
    BoostScheme scheme = BoostScheme::None;
    double weight = 0.0;  // c, for Uniform/Benchmark
    bool effective = false;

    double at(int i, int j) const { return z[i][j]; }

    bool is_zero() const {
        for (const auto& row : z)
            for (double v : row)
                if (v != 0.0) return false;
        return true;
    }
};

inline void check_dims(const BoostMatrix& boosts, const ProblemInstance& inst) {
    if (static_cast<int>(boosts.z.size()) != inst.num_bidders)
        throw std::invalid_argument("boost matrix row count mismatch");
    for (const auto& row : boosts.z)
        if (static_cast<int>(row.size()) != inst.num_auctions)
            throw std::invalid_argument("boost matrix row length mismatch");
}

inline BoostMatrix zero_boosts(const ProblemInstance& inst) {
    BoostMatrix b;
    b.z.assign(inst.num_bidders, std::vector<double>(inst.num_auctions, 0.0));
    return b;
}

/// z_{i,j} = c * v_{i,j}; c-value-competitive by construction.
inline BoostMatrix uniform_boosts(const ProblemInstance& inst, double c) {
    if (!(c >= 0.0)) throw std::invalid_argument("boost weight must be non-negative");
    BoostMatrix b = zero_boosts(inst);
    b.scheme = BoostScheme::Uniform;
    b.weight = c;
    for (int i = 0; i < inst.num_bidders; ++i)
        for (int j = 0; j < inst.num_auctions; ++j) b.z[i][j] = c * inst.values[i][j];
    return b;
}

/// The minimal c-benchmark-competitive boosts: the bidder ranked k <= s_j in
/// auction j gets c times the sum of the in-slot values at ranks k..s_j,
/// bidders ranked below the slots get 0.
inline BoostMatrix benchmark_boosts(const ProblemInstance& inst, const BenchmarkOrder& order,
                                    double c) {
    if (!(c >= 0.0)) throw std::invalid_argument("boost weight must be non-negative");
    if (!is_valid_order(order, inst)) throw std::invalid_argument("benchmark order mismatch");
    BoostMatrix b = zero_boosts(inst);
    b.scheme = BoostScheme::Benchmark;
    b.weight = c;
    for (int j = 0; j < inst.num_auctions; ++j) {
        const int filled = inst.filled_slots(j);
        double suffix = 0.0;
        for (int k = filled - 1; k >= 0; --k) {
            const int bidder = order.ranking[j][k];
            suffix += inst.values[bidder][j];
            b.z[bidder][j] = c * suffix;
        }
    }
    return b;
}

/// Wraps an arbitrary non-negative matrix; competitiveness is whatever the
/// verifiers say it is.
inline BoostMatrix custom_boosts(const ProblemInstance& inst, std::vector<std::vector<double>> z) {
    BoostMatrix b;
    b.z = std::move(z);
    b.scheme = BoostScheme::Custom;
    check_dims(b, inst);
    for (const auto& row : b.z)
        for (double v : row)
            if (!(v >= 0.0) || !std::isfinite(v))
                throw std::invalid_argument("raw boosts must be non-negative");
    return b;
}

/// Effective boosts for the seller-cost extension: z~ = z - psi. Entries may
/// go negative. Applying twice is rejected.
inline BoostMatrix apply_seller_cost(const BoostMatrix& boosts, const ProblemInstance& inst) {
    check_dims(boosts, inst);
    if (boosts.effective) throw std::invalid_argument("seller costs already applied");
    BoostMatrix out = boosts;
    out.effective = true;
    for (int i = 0; i < inst.num_bidders; ++i)
        for (int j = 0; j < inst.num_auctions; ++j) out.z[i][j] -= inst.seller_cost(i, j);
    return out;
}

namespace detail {
// Comparisons between sums of products need a little slack; equality cases
// (the minimal constructions) must pass.
inline double competitive_tol(double a, double b) {
    return 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}
}  // namespace detail

struct ValueCompetitiveResult {
    bool ok = true;
    int bidder_hi = -1;  // witness pair on failure: v[bidder_hi][auction] > v[bidder_lo][auction]
    int bidder_lo = -1;
    int auction = -1;
};

/// True iff z_{i,j} - z_{i',j} >= c * (v_{i,j} - v_{i',j}) for every auction
/// and every ordered pair with v_{i,j} > v_{i',j}.
inline ValueCompetitiveResult is_value_competitive(const BoostMatrix& boosts,
                                                   const ProblemInstance& inst, double c) {
    check_dims(boosts, inst);
    if (boosts.effective)
        throw std::invalid_argument("competitiveness is defined on raw boosts only");
    for (int j = 0; j < inst.num_auctions; ++j) {
        for (int i = 0; i < inst.num_bidders; ++i) {
            for (int i2 = 0; i2 < inst.num_bidders; ++i2) {
                if (inst.values[i][j] <= inst.values[i2][j]) continue;
                const double lhs = boosts.z[i][j] - boosts.z[i2][j];
                const double rhs = c * (inst.values[i][j] - inst.values[i2][j]);
                if (lhs < rhs - detail::competitive_tol(lhs, rhs))
                    return {false, i, i2, j};
            }
        }
    }
    return {};
}

struct BenchmarkCompetitiveResult {
    bool ok = true;
    int auction = -1;  // witness on failure: ranks are 0-based into order.ranking[auction]
    int rank_hi = -1;
    int rank_lo = -1;
};

/// True iff z_{o_j(k),j} - z_{o_j(k'),j} >= c * v_{o_j(k),j} for every
/// auction j, in-slot rank k, and lower rank k' > k.
inline BenchmarkCompetitiveResult is_benchmark_competitive(const BoostMatrix& boosts,
                                                           const ProblemInstance& inst,
                                                           const BenchmarkOrder& order, double c) {
    check_dims(boosts, inst);
    if (boosts.effective)
        throw std::invalid_argument("competitiveness is defined on raw boosts only");
    if (!is_valid_order(order, inst)) throw std::invalid_argument("benchmark order mismatch");
    for (int j = 0; j < inst.num_auctions; ++j) {
        const int filled = inst.filled_slots(j);
        for (int k = 0; k < filled; ++k) {
            const int hi = order.ranking[j][k];
            const double rhs = c * inst.values[hi][j];
            for (int k2 = k + 1; k2 < inst.num_bidders; ++k2) {
                const int lo = order.ranking[j][k2];
                const double lhs = boosts.z[hi][j] - boosts.z[lo][j];
                if (lhs < rhs - detail::competitive_tol(lhs, rhs))
                    return {false, j, k, k2};
            }
        }
    }
    return {};
}

}  // namespace autobid
