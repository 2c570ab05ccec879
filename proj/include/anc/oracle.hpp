#ifndef ANC_ORACLE_HPP
#define ANC_ORACLE_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "anc/network.hpp"
#include "anc/prng.hpp"

namespace anc {

struct SimConfig {
    std::int64_t samples = 100000;
    std::uint64_t seed = 1;
};

// Link-level simulation result. Signal and noise reach the destination
// through the same linear map, so each sample splits exactly into a
// source-driven and a noise-driven component.
struct SimResult {
    double snr = 0.0;
    double signal_power = 0.0;
    double noise_power = 0.0;
    std::map<std::string, double> node_power;      // empirical E[x_k^2] per transmitting node
    std::map<std::string, double> node_power_se;   // standard error of that estimate
};

SimResult monte_carlo_sim(const RelayDag& net, const GainAssignment& gains,
                          const SimConfig& cfg);

// Same machinery for the two-source relay layer: empirical per-source and
// sum capacities of the equivalent scalar channel, plus relay powers.
struct MacSimResult {
    double cap1 = 0.0;
    double cap2 = 0.0;
    double cap_sum = 0.0;
    std::vector<double> relay_power;
    std::vector<double> relay_power_se;
};

MacSimResult monte_carlo_mac(const TwoHopMac& mac, const Vec& beta, const SimConfig& cfg);

// Deterministic box search for good amplification gains. Starts from a
// uniform grid over [0, cap] per relay and shrinks the box around the
// incumbent each round.
struct GridSearchResult {
    GainAssignment gains;
    double rate = 0.0;  // bits
};

// objective: maps a gain vector (relay order = lexicographic ids) to the
// SNR-like value being maximized; defaults to the destination SNR.
GridSearchResult grid_search_best_gains(
    const RelayDag& net, int grid_points_per_dim = 17, int refine_rounds = 3,
    const std::function<double(const Vec&)>& objective = {});

// Relay ids in the fixed (lexicographic) order used by vector objectives.
std::vector<std::string> relay_order(const RelayDag& net);

// Multi-start coordinate ascent over the [0, cap] box; used where the
// objective is too irregular for the plain grid. Evaluation budget capped.
struct AscentResult {
    Vec best;
    double value = 0.0;
    bool budget_exhausted = false;
};

AscentResult coordinate_ascent_max(const std::function<double(const Vec&)>& objective,
                                   const Vec& upper, int starts = 8, double step_tol = 1e-8,
                                   std::int64_t eval_budget = 2000000,
                                   std::uint64_t seed = 1);

struct RegionPolyline;  // mac_region.hpp
bool hull_contains(const RegionPolyline& region, std::array<double, 2> point,
                   double tol = 1e-9);

// Fixed-order parallel map: runs fn(block) over [0, count) in fixed-size
// blocks and hands results back in block order, so reductions are
// schedule-independent.
void parallel_blocks(std::int64_t count, std::int64_t block_size,
                     const std::function<void(std::int64_t, std::int64_t, int)>& fn);

}  // namespace anc

#endif
