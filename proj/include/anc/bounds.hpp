#ifndef ANC_BOUNDS_HPP
#define ANC_BOUNDS_HPP

#include <functional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "anc/network.hpp"
#include "anc/snr.hpp"

namespace anc {

// Closed-form per-layer rate bounds and their minimum.
struct UpperBoundReport {
    std::vector<double> layer_bounds;          // bits, index l0-1 for l0 = 1..L
    std::vector<double> layer_received_power;  // total worst-case received power per layer
    int argmin_layer = 1;                      // 1-based l0 attaining the minimum
    double value = 0.0;                        // bits
};

UpperBoundReport anc_upper_bound(const LayeredNetwork& net);

// Numeric upper bound over caller-supplied cut node sets (no closed form
// exists): min over cuts of the maximized cut SNR capacity.
struct CutSearchBudget {
    int starts = 8;
    double step_tol = 1e-8;
    std::int64_t eval_budget = 2000000;
    std::uint64_t seed = 1;
};

struct CutBoundResult {
    double value = 0.0;  // bits
    bool budget_exhausted = false;
    std::string note;  // always flags the numeric (non-certified) nature
};

CutBoundResult general_cut_upper_bound(const RelayDag& net,
                                       const std::vector<std::set<std::string>>& cuts,
                                       const CutSearchBudget& budget = {});

// Cooperative MIMO capacity of the single hop entering layer l0 under the
// relaxed sum-power constraint; solved by water-filling over the hop's
// singular values.
double mimo_cut_capacity(const LayeredNetwork& net, int l0);

// Achievable-rate lower bound built from the mixed amplification scheme
// anchored at layer l0, together with every constant in its derivation and
// the emitted gains.
struct LowerBoundReport {
    int l0 = 1;
    double delta0 = 0.0;       // worst reciprocal received power outside layer l0
    double delta_prime = 0.0;  // same, additionally excluding layer l0+1
    double c1 = 0.0;           // scale of the matched layer-l0 gains
    double c2 = 0.0;           // propagated noise power from layers above l0
    double c3 = 0.0;
    double c4 = 0.0;           // total non-l0 relay noise power at the destination
    double c5 = 0.0;
    GainAssignment gains;
    double value = 0.0;  // bits
    double upper = 0.0;  // matching closed-form upper bound, bits
    double gap = 0.0;    // upper - value
};

LowerBoundReport anc_lower_bound(const LayeredNetwork& net, int l0);
LowerBoundReport best_lower_bound(const LayeredNetwork& net);  // max over l0

// One row of a high-SNR sweep table.
struct GapSweepRow {
    double param = 0.0;
    double r_up = 0.0;
    double r_low = 0.0;
    double delta = 0.0;
    double delta0 = 0.0;
    double delta_prime = 0.0;
    double emitted_rate = 0.0;  // rate of the emitted gains, for sandwich checks
};

std::vector<GapSweepRow> high_snr_gap_sweep(
    const std::function<LayeredNetwork(double)>& family, std::span<const double> grid, int l0);

}  // namespace anc

#endif
