#ifndef ANC_SCHEMES_HPP
#define ANC_SCHEMES_HPP

#include <string>

#include "anc/network.hpp"
#include "anc/snr.hpp"

namespace anc {

// Two-hop amplification strategies. All take a two-layer network.

// Every relay transmits at its cap.
GainAssignment scheme_max_gain(const LayeredNetwork& net);

// Gains proportional to sqrt(received power)/outgoing gain, scaled until
// the first relay hits its cap; optimal when only relay-layer noise counts.
GainAssignment scheme_pseudo_optimal(const LayeredNetwork& net);

// Single best relay forwards, all others stay silent; ties break toward
// the lexicographically smallest id.
GainAssignment scheme_selection(const LayeredNetwork& net);

// Multi-hop scheme anchored at layer l0: uniform-margin gains below,
// matched direction at l0, caps above. Shares its construction with the
// lower-bound machinery.
GainAssignment mixed_multihop_scheme(const LayeredNetwork& net, int l0);

enum class Dominance { UpperLayerDominant, LowerLayerDominant, Neither };

const char* to_string(Dominance d);

// Which side of the destination's total noise dominates, witnessed by the
// relay-propagated noise powers of the max-gain and pseudo-optimal schemes.
struct DominanceClass {
    Dominance kind = Dominance::Neither;
    double upper_noise_max_gain = 0.0;   // E[(w^(1))^2]
    double upper_noise_pseudo = 0.0;     // E[(w^(2))^2]
};

DominanceClass classify_dominance(const LayeredNetwork& net);

// A scheme together with an arithmetic guarantee on its distance from the
// optimal rate.
struct GapCertificate {
    std::string scheme;      // "max-gain" | "pseudo-optimal"
    double rate = 0.0;       // achieved, bits
    double bound = 0.0;      // cited upper bound on the optimal rate, bits
    double gap_bound = 0.0;  // guaranteed gap, bits
    double epsilon = 1.0;    // max squared gain ratio between the two schemes
    Dominance dominance = Dominance::Neither;
};

GapCertificate gap_certificate(const LayeredNetwork& net);

}  // namespace anc

#endif
