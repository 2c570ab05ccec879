#ifndef ANC_TESTS_FIXTURES_HPP
#define ANC_TESTS_FIXTURES_HPP

// Reconstructed demonstration fixtures. The two-source examples are
// reverse-engineered from their quoted noise powers via a swap-symmetric
// family (see README, "example networks"); the channel values are
// inferred, not ground truth.

#include <cmath>

#include "anc/network.hpp"

namespace anc::testfix {

// swap-symmetric two-source layer: h01 = (p, q), h02 = (q, p), h1 = (r, r)
inline TwoHopMac symmetric_mac(double p, double q, double r, double cap, double ps) {
    TwoHopMac mac;
    mac.n = 2;
    mac.h01 = {p, q};
    mac.h02 = {q, p};
    mac.h1 = {r, r};
    mac.caps = {cap, cap};
    mac.ps1 = ps;
    mac.ps2 = ps;
    mac.finalize();
    return mac;
}

// relay-noise powers 6.33 (cap and sum-direction schemes) and 3.29
// (individual-rate directions): upper-layer dominant
inline TwoHopMac mac_upper_dominant() {
    const double w_caps = 6.33, w_indiv = 3.29, r = 2.0, cap = 1.0;
    const double q2 = 2.0 * w_indiv / w_caps - 1.0;
    const double ps = (2.0 * r * r * cap / w_caps - 1.0) / (1.0 + q2);
    return symmetric_mac(1.0, std::sqrt(q2), r, cap, ps);
}

// relay-noise powers 0.38 and 0.20: lower-layer dominant
inline TwoHopMac mac_lower_dominant() {
    const double w_caps = 0.38, w_indiv = 0.20, r = 1.0, cap = 1.0;
    const double q2 = 2.0 * w_indiv / w_caps - 1.0;
    const double ps = (2.0 * r * r * cap / w_caps - 1.0) / (1.0 + q2);
    return symmetric_mac(1.0, std::sqrt(q2), r, cap, ps);
}

}  // namespace anc::testfix

#endif
