#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "autobid/boosts.hpp"
#include "autobid/instance.hpp"

namespace autobid {

struct BidProfile {
    std::vector<std::vector<double>> bids;  // [bidder][auction]
};

struct RankedScore {
    int bidder = -1;
    double score = 0.0;
};

/// assignment[j][k] is the bidder winning slot k of auction j; rows have
/// length filled_slots(j).
using SlotAssignment = std::vector<std::vector<int>>;

struct AuctionOutcome {
    SlotAssignment assignment;
    std::vector<std::vector<double>> payments;       // [bidder][auction], 0 for non-winners
    std::vector<std::vector<RankedScore>> rankings;  // per auction, score-descending

    std::optional<int> slot_of(int bidder, int auction) const {
        const auto& winners = assignment[auction];
        for (int k = 0; k < static_cast<int>(winners.size()); ++k)
            if (winners[k] == bidder) return k;
        return std::nullopt;
    }
};

enum class Mechanism { Vcg, Gsp, GspUniformEnforced, FpaUniformEnforced };

inline const char* to_string(Mechanism mech) {
    switch (mech) {
        case Mechanism::Vcg: return "vcg";
        case Mechanism::Gsp: return "gsp";
        case Mechanism::GspUniformEnforced: return "gsp-uniform-enforced";
        case Mechanism::FpaUniformEnforced: return "fpa-uniform-enforced";
    }
    return "unknown";
}

namespace detail {

inline void check_bid_dims(const ProblemInstance& inst, const BidProfile& bids) {
    if (static_cast<int>(bids.bids.size()) != inst.num_bidders)
        throw std::invalid_argument("bid profile row count mismatch");
    for (const auto& row : bids.bids) {
        if (static_cast<int>(row.size()) != inst.num_auctions)
            throw std::invalid_argument("bid profile row length mismatch");
        for (double b : row)
            if (!(b >= 0.0) || !std::isfinite(b))
                throw std::invalid_argument("bids must be finite and non-negative");
    }
}

inline double pos_or_zero(const ProblemInstance& inst, int j, int k) {
    return k < inst.slots[j] ? inst.pos[j][k] : 0.0;
}

}  // namespace detail

/// Ranking scores b_{i,j} + z_{i,j} for auction j, sorted descending; ties
/// go to the lower bidder index. All n bidders appear; consumers treat ranks
/// beyond n as score 0.
inline std::vector<RankedScore> rank_scores(const ProblemInstance& inst, const BidProfile& bids,
                                            const BoostMatrix& boosts, int auction) {
    std::vector<RankedScore> ranking(inst.num_bidders);
    for (int i = 0; i < inst.num_bidders; ++i)
        ranking[i] = {i, bids.bids[i][auction] + boosts.at(i, auction)};
    std::sort(ranking.begin(), ranking.end(), [](const RankedScore& a, const RankedScore& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.bidder < b.bidder;
    });
    return ranking;
}

namespace detail {

inline AuctionOutcome allocate(const ProblemInstance& inst, const BidProfile& bids,
                               const BoostMatrix& boosts) {
    check_bid_dims(inst, bids);
    check_dims(boosts, inst);
    AuctionOutcome out;
    out.assignment.resize(inst.num_auctions);
    out.payments.assign(inst.num_bidders, std::vector<double>(inst.num_auctions, 0.0));
    out.rankings.resize(inst.num_auctions);
    for (int j = 0; j < inst.num_auctions; ++j) {
        out.rankings[j] = rank_scores(inst, bids, boosts, j);
        const int filled = inst.filled_slots(j);
        out.assignment[j].resize(filled);
        for (int k = 0; k < filled; ++k) out.assignment[j][k] = out.rankings[j][k].bidder;
    }
    return out;
}

}  // namespace detail

/// VCG with boosts. The winner of slot k pays
///   sum_{t=k+1}^{s_j} (score_t - z_i)^+ * (pos_{t-1} - pos_t)
/// in 1-based rank terms extended one rank past the slots, with
/// pos_{s_j+1} := 0 and the (s_j+1)-th score := highest non-winning score
/// (0 if every bidder wins). The literal textbook sum stops at s_j, which
/// would make every single-slot auction free; extending it by one rank is
/// the unique reading that reduces to second-price at s_j = 1.
inline AuctionOutcome run_vcg(const ProblemInstance& inst, const BidProfile& bids,
                              const BoostMatrix& boosts) {
    AuctionOutcome out = detail::allocate(inst, bids, boosts);
    for (int j = 0; j < inst.num_auctions; ++j) {
        const auto& ranking = out.rankings[j];
        const int filled = inst.filled_slots(j);
        for (int k = 0; k < filled; ++k) {
            const int bidder = ranking[k].bidder;
            const double z = boosts.at(bidder, j);
            double pay = 0.0;
            for (int t = k + 1; t <= inst.slots[j]; ++t) {
                const double score = t < inst.num_bidders ? ranking[t].score : 0.0;
                const double span = detail::pos_or_zero(inst, j, t - 1) - detail::pos_or_zero(inst, j, t);
                pay += std::max(0.0, score - z) * span;
            }
            out.payments[bidder][j] = pay;
        }
    }
    return out;
}

/// GSP with boosts: identical allocation to VCG; the slot-k winner pays
/// (score_{k+1} - z_i)^+ * pos_k.
inline AuctionOutcome run_gsp(const ProblemInstance& inst, const BidProfile& bids,
                              const BoostMatrix& boosts) {
    AuctionOutcome out = detail::allocate(inst, bids, boosts);
    for (int j = 0; j < inst.num_auctions; ++j) {
        const auto& ranking = out.rankings[j];
        const int filled = inst.filled_slots(j);
        for (int k = 0; k < filled; ++k) {
            const int bidder = ranking[k].bidder;
            const double z = boosts.at(bidder, j);
            const double next = k + 1 < inst.num_bidders ? ranking[k + 1].score : 0.0;
            out.payments[bidder][j] = std::max(0.0, next - z) * inst.pos[j][k];
        }
    }
    return out;
}

/// First-price position auction: rank by bids, the slot-k winner pays her
/// own bid times pos_k. Boosts are not part of the first-price model.
inline AuctionOutcome run_fpa(const ProblemInstance& inst, const BidProfile& bids) {
    AuctionOutcome out = detail::allocate(inst, bids, zero_boosts(inst));
    for (int j = 0; j < inst.num_auctions; ++j) {
        const int filled = inst.filled_slots(j);
        for (int k = 0; k < filled; ++k) {
            const int bidder = out.assignment[j][k];
            out.payments[bidder][j] = bids.bids[bidder][j] * inst.pos[j][k];
        }
    }
    return out;
}

/// Clears all auctions under the given mechanism. First-price rejects any
/// non-trivial boost matrix.
inline AuctionOutcome clear_auctions(const ProblemInstance& inst, const BidProfile& bids,
                                     const BoostMatrix& boosts, Mechanism mech) {
    switch (mech) {
        case Mechanism::Vcg: return run_vcg(inst, bids, boosts);
        case Mechanism::Gsp:
        case Mechanism::GspUniformEnforced: return run_gsp(inst, bids, boosts);
        case Mechanism::FpaUniformEnforced:
            check_dims(boosts, inst);
            if (!boosts.is_zero())
                throw std::invalid_argument("first-price auctions do not take boosts");
            return run_fpa(inst, bids);
    }
    throw std::invalid_argument("unknown mechanism");
}

}  // namespace autobid
