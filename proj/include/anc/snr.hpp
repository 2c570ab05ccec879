#ifndef ANC_SNR_HPP
#define ANC_SNR_HPP

#include <map>
#include <set>
#include <string>

#include "anc/network.hpp"

namespace anc {

// Per-node power feasibility data: the received-power upper bound, its
// reciprocal, and the largest amplification gain that provably respects
// the node's transmit cap.
struct PowerProfile {
    std::map<std::string, double> received_power;  // every non-source node
    std::map<std::string, double> delta;           // 1 / received_power
    std::map<std::string, double> gain_cap;        // relays only
};

// Worst-case (fully coherent) received power at a non-source node when
// every upstream node transmits at its cap.
double received_power_bound(const RelayDag& net, const std::string& node);

PowerProfile power_profile(const RelayDag& net);
PowerProfile power_profile(const LayeredNetwork& net);

// End-to-end transfer coefficient from node j to node k: the sum over all
// j->k paths of the per-hop products beta*h, computed by one topological
// sweep. Returns 1 for j == k and 0 when no path exists.
double global_coefficient(const RelayDag& net, const GainAssignment& gains,
                          const std::string& j, const std::string& k);

// Signal/noise decomposition of the destination observation.
struct SnrBreakdown {
    double signal_power = 0.0;
    std::map<std::string, double> per_source_noise;  // relay j -> propagated noise power
    double dest_noise = 1.0;
    std::vector<double> per_layer_noise;  // layered only: relay layers 1..L-1
    double snr = 0.0;

    double relay_noise() const {
        double s = 0.0;
        for (const auto& [_, v] : per_source_noise) s += v;
        return s;
    }
};

SnrBreakdown destination_snr(const RelayDag& net, const GainAssignment& gains);
SnrBreakdown destination_snr(const LayeredNetwork& net, const GainAssignment& gains);

// Destination SNR when only layer l0 injects noise (l0 == L: only the
// destination's own noise counts).
double ideal_layer_snr(const LayeredNetwork& net, const GainAssignment& gains, int l0);

// Destination SNR when only the nodes in J inject noise. J must be a
// nonempty subset of relays plus possibly the destination.
double cut_snr(const RelayDag& net, const GainAssignment& gains,
               const std::set<std::string>& cut_nodes);

// Gaussian capacity in bits per channel use.
double rate_from_snr(double snr);

}  // namespace anc

#endif
