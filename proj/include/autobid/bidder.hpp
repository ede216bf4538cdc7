#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "autobid/auction.hpp"
#include "autobid/instance.hpp"

namespace autobid {

/// Uniform-bidding strategy state: bidder i bids alpha_i * v_{i,j} everywhere.
struct MultiplierProfile {
    std::vector<double> alpha;
};

inline void validate_profile(const MultiplierProfile& profile, int num_bidders) {
    if (static_cast<int>(profile.alpha.size()) != num_bidders)
        throw std::invalid_argument("multiplier profile size mismatch");
    for (double a : profile.alpha)
        if (!(a > 0.0) || !std::isfinite(a))
            throw std::invalid_argument("multipliers must be positive and finite");
}

inline BidProfile uniform_bids(const ProblemInstance& inst, const MultiplierProfile& profile) {
    validate_profile(profile, inst.num_bidders);
    BidProfile bids;
    bids.bids.assign(inst.num_bidders, std::vector<double>(inst.num_auctions, 0.0));
    for (int i = 0; i < inst.num_bidders; ++i)
        for (int j = 0; j < inst.num_auctions; ++j)
            bids.bids[i][j] = profile.alpha[i] * inst.values[i][j];
    return bids;
}

/// Per-bidder totals for one clearing. target is min(budget, value received),
/// the spend level the response dynamic steers towards.
struct BidderLedger {
    std::vector<double> value;
    std::vector<double> spend;
    std::vector<double> target;
};

inline BidderLedger ledger_from_outcome(const ProblemInstance& inst,
                                        const AuctionOutcome& outcome) {
    BidderLedger ledger;
    ledger.value.assign(inst.num_bidders, 0.0);
    ledger.spend.assign(inst.num_bidders, 0.0);
    ledger.target.assign(inst.num_bidders, 0.0);
    for (int j = 0; j < inst.num_auctions; ++j) {
        const auto& winners = outcome.assignment[j];
        for (int k = 0; k < static_cast<int>(winners.size()); ++k) {
            const int i = winners[k];
            ledger.value[i] += inst.values[i][j] * inst.pos[j][k];
        }
    }
    for (int i = 0; i < inst.num_bidders; ++i) {
        for (int j = 0; j < inst.num_auctions; ++j) ledger.spend[i] += outcome.payments[i][j];
        const double cap = inst.budgets[i].value_or(std::numeric_limits<double>::infinity());
        ledger.target[i] = std::min(cap, ledger.value[i]);
    }
    return ledger;
}

struct ProfileClassification {
    std::vector<bool> feasible;
    std::vector<bool> undominated;
    bool in_theta = false;
    BidderLedger ledger;
    AuctionOutcome outcome;
};

namespace detail {

inline void classify_flags(const ProblemInstance& inst, const MultiplierProfile& profile,
                           const BidderLedger& ledger, double tol,
                           std::vector<bool>& feasible, std::vector<bool>& undominated) {
    const int n = inst.num_bidders;
    feasible.assign(n, false);
    undominated.assign(n, false);
    for (int i = 0; i < n; ++i) {
        const double budget = inst.budgets[i].value_or(std::numeric_limits<double>::infinity());
        const double cap = std::min(budget, ledger.value[i]);
        feasible[i] = ledger.spend[i] <= cap + tol * std::max(1.0, cap);
        const bool at_budget = inst.budgets[i].has_value() &&
                               ledger.spend[i] >= budget - tol * std::max(1.0, budget);
        undominated[i] = profile.alpha[i] >= 1.0 - tol || at_budget;
    }
}

}  // namespace detail

/// Clears the auctions at the given profile and classifies each bidder:
/// feasible (spend within min(value, budget)), undominated (multiplier at
/// least 1, or budget binding). The profile is in Theta iff every bidder is
/// both. tol is relative.
inline ProfileClassification classify_profile(const ProblemInstance& inst, Mechanism mech,
                                              const BoostMatrix& boosts,
                                              const MultiplierProfile& profile,
                                              double tol = 1e-9) {
    validate_profile(profile, inst.num_bidders);
    ProfileClassification result;
    result.outcome = clear_auctions(inst, uniform_bids(inst, profile), boosts, mech);
    result.ledger = ledger_from_outcome(inst, result.outcome);
    detail::classify_flags(inst, profile, result.ledger, tol, result.feasible, result.undominated);
    result.in_theta = true;
    for (int i = 0; i < inst.num_bidders; ++i)
        result.in_theta = result.in_theta && result.feasible[i] && result.undominated[i];
    return result;
}

struct UpdateOptions {
    double log_ratio_clamp = std::log(10.0);  // L
    double alpha_min = 1e-6;
    double alpha_max = 1e6;
};

/// One synchronous response step: every bidder moves her multiplier in log
/// space towards matching spend to target,
///   log alpha' = log alpha + eta * clamp(log(target / spend), -L, L).
/// Degenerate ledgers clamp: zero spend with positive target pushes up by L,
/// the reverse pushes down by L, and a fully idle bidder (0/0) holds still.
inline MultiplierProfile update_multipliers(const MultiplierProfile& profile,
                                            const BidderLedger& ledger, double eta,
                                            const UpdateOptions& opts = {}) {
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must be in (0, 1]");
    const int n = static_cast<int>(profile.alpha.size());
    if (static_cast<int>(ledger.spend.size()) != n || static_cast<int>(ledger.target.size()) != n)
        throw std::invalid_argument("ledger size mismatch");
    const double L = opts.log_ratio_clamp;
    MultiplierProfile next = profile;
    for (int i = 0; i < n; ++i) {
        const double target = ledger.target[i];
        const double spend = ledger.spend[i];
        double step;
        if (spend <= 0.0 && target <= 0.0) {
            step = 0.0;
        } else if (spend <= 0.0) {
            step = L;
        } else if (target <= 0.0) {
            step = -L;
        } else {
            step = std::clamp(std::log(target / spend), -L, L);
        }
        const double log_alpha = std::log(profile.alpha[i]) + eta * step;
        next.alpha[i] = std::clamp(std::exp(log_alpha), opts.alpha_min, opts.alpha_max);
    }
    return next;
}

}  // namespace autobid
