#pragma once

#include "autobid/bidder.hpp"
#include "autobid/instance.hpp"

namespace autobid::fixtures {

/// Two bidders, two single-slot auctions:
///   v = [[1+d, eps], [0, 1]].
/// The canonical worst case for uniform boosts of weight c <= d: bidder 1
/// can profitably corner both auctions, pinning welfare to (d+1+eps) out of
/// the optimal (d+2).
struct UniformBoostWorstCase {
    ProblemInstance instance;
    double d = 1.0;
    double epsilon = 0.1;

    /// The corner profile: alpha_1 clears the (1+c)/eps winning threshold
    /// with 10% margin, alpha_2 stays at 1. At c = 0, eps = 0.1 this is
    /// (11, 1).
    MultiplierProfile corner_profile(double c) const {
        return {{1.1 * (1.0 + c) / epsilon, 1.0}};
    }
};

inline UniformBoostWorstCase uniform_boost_worst_case(double d = 1.0, double epsilon = 0.1) {
    UniformBoostWorstCase fixture;
    fixture.d = d;
    fixture.epsilon = epsilon;
    fixture.instance = make_single_slot_instance({{1.0 + d, epsilon}, {0.0, 1.0}});
    return fixture;
}

/// Three bidders, auction 1 with two slots (pos 1 and 0.9), auction 2 with
/// one slot. Under GSP, bidder 1's best uniform multiplier nets value 1,
/// while bidding low in auction 1 and high in auction 2 nets 1.7 for a
/// total payment of 1.
inline ProblemInstance gsp_nonuniform_case() {
    ProblemInstance inst;
    inst.num_bidders = 3;
    inst.num_auctions = 2;
    inst.slots = {2, 1};
    inst.values = {{1.0, 0.8}, {0.9, 0.0}, {0.0, 1.0}};
    inst.pos = {{1.0, 0.9}, {1.0}};
    inst.budgets.assign(3, std::nullopt);
    return inst;
}

/// The non-uniform bid profile that beats uniform bidding in the GSP case:
/// bidder 1 underbids auction 1 and clears the 1.25 threshold in auction 2.
inline BidProfile gsp_nonuniform_bids() {
    return {{{0.01, 1.0}, {0.9, 0.0}, {0.0, 1.0}}};
}

/// Two bidders, two single-slot first-price auctions, v = [[4, 1], [1, 2]].
/// Uniform bidding forces multiplier 1 (values 4 and 2); bidder 1 bidding
/// (2, 3) instead takes both auctions for value 5.
inline ProblemInstance fpa_nonuniform_case() {
    return make_single_slot_instance({{4.0, 1.0}, {1.0, 2.0}});
}

inline BidProfile fpa_nonuniform_bids() {
    return {{{2.0, 3.0}, {1.0, 2.0}}};
}

}  // namespace autobid::fixtures
