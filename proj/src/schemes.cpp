#include "anc/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "anc/bounds.hpp"

namespace anc {

namespace {

void require_two_hop(const LayeredNetwork& net) {
    if (net.layer_count() != 2)
        throw std::invalid_argument("scheme requires a two-hop network");
}

struct TwoHop {
    std::vector<std::string> ids;
    Vec h_in;   // source -> relay
    Vec h_out;  // relay -> destination
    Vec caps;
    Vec rcv;    // received power bound per relay
    Vec cap_gain;
};

TwoHop unpack(const LayeredNetwork& net) {
    require_two_hop(net);
    TwoHop t;
    t.ids = net.ids[0];
    t.h_in = net.h0();
    t.h_out = net.h_last();
    t.caps = net.caps[0];
    const PowerProfile prof = power_profile(net);
    for (const std::string& id : t.ids) {
        t.rcv.push_back(prof.received_power.at(id));
        t.cap_gain.push_back(prof.gain_cap.at(id));
    }
    return t;
}

GainAssignment pack(const TwoHop& t, const Vec& beta) {
    GainAssignment g;
    for (size_t i = 0; i < t.ids.size(); ++i) g.beta[t.ids[i]] = beta[i];
    return g;
}

double upper_layer_noise(const TwoHop& t, const Vec& beta) {
    double s = 0.0;
    for (size_t i = 0; i < beta.size(); ++i) {
        const double v = beta[i] * t.h_out[i];
        s += v * v;
    }
    return s;
}

double signal_power(const TwoHop& t, const Vec& beta, double ps) {
    double amp = 0.0;
    for (size_t i = 0; i < beta.size(); ++i) amp += t.h_in[i] * beta[i] * t.h_out[i];
    return amp * amp * ps;
}

Vec pseudo_optimal_vec(const TwoHop& t) {
    // direction sqrt(rcv)/h_out, scaled so the binding relay hits its cap;
    // relays with no outgoing gain carry nothing and stay silent
    double c = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < t.ids.size(); ++i) {
        if (t.h_out[i] == 0.0) continue;
        c = std::min(c, t.cap_gain[i] * t.h_out[i] / std::sqrt(t.rcv[i]));
    }
    if (!std::isfinite(c))
        throw std::domain_error("every relay has zero outgoing gain");
    Vec beta(t.ids.size(), 0.0);
    for (size_t i = 0; i < t.ids.size(); ++i)
        if (t.h_out[i] > 0.0) beta[i] = c * std::sqrt(t.rcv[i]) / t.h_out[i];
    return beta;
}

}  // namespace

GainAssignment scheme_max_gain(const LayeredNetwork& net) {
    const TwoHop t = unpack(net);
    return pack(t, t.cap_gain);
}

GainAssignment scheme_pseudo_optimal(const LayeredNetwork& net) {
    const TwoHop t = unpack(net);
    return pack(t, pseudo_optimal_vec(t));
}

GainAssignment scheme_selection(const LayeredNetwork& net) {
    const TwoHop t = unpack(net);
    size_t best = 0;
    double best_metric = -1.0;
    for (size_t i = 0; i < t.ids.size(); ++i) {
        const double m = t.h_in[i] * t.h_out[i] * t.cap_gain[i];
        if (m * m > best_metric) {  // strict: first (smallest id) wins ties
            best_metric = m * m;
            best = i;
        }
    }
    Vec beta(t.ids.size(), 0.0);
    beta[best] = t.cap_gain[best];
    return pack(t, beta);
}

GainAssignment mixed_multihop_scheme(const LayeredNetwork& net, int l0) {
    return anc_lower_bound(net, l0).gains;
}

const char* to_string(Dominance d) {
    switch (d) {
        case Dominance::UpperLayerDominant: return "upper-layer-dominant";
        case Dominance::LowerLayerDominant: return "lower-layer-dominant";
        default: return "neither";
    }
}

DominanceClass classify_dominance(const LayeredNetwork& net) {
    const TwoHop t = unpack(net);
    DominanceClass d;
    d.upper_noise_max_gain = upper_layer_noise(t, t.cap_gain);
    d.upper_noise_pseudo = upper_layer_noise(t, pseudo_optimal_vec(t));
    if (d.upper_noise_pseudo > d.upper_noise_max_gain + 1e-9)
        throw std::logic_error("pseudo-optimal noise exceeds max-gain noise");
    if (d.upper_noise_pseudo >= 1.0) {
        d.kind = Dominance::UpperLayerDominant;
    } else if (d.upper_noise_max_gain <= 1.0) {
        d.kind = Dominance::LowerLayerDominant;
    } else {
        d.kind = Dominance::Neither;
    }
    return d;
}

GapCertificate gap_certificate(const LayeredNetwork& net) {
    const TwoHop t = unpack(net);
    const double ps = net.source_power;
    const Vec b1 = t.cap_gain;
    const Vec b2 = pseudo_optimal_vec(t);
    const double w1 = upper_layer_noise(t, b1);
    const double w2 = upper_layer_noise(t, b2);
    const double sig1 = signal_power(t, b1, ps);
    const double sig2 = signal_power(t, b2, ps);
    const double rate1 = rate_from_snr(sig1 / (w1 + 1.0));
    const double rate2 = rate_from_snr(sig2 / (w2 + 1.0));

    // Bounds from the certification chains: the first-hop bound equals the
    // pseudo-optimal signal-to-relay-noise ratio, the last-hop bound the
    // max-gain signal power with all other noise zeroed.
    const double bound_hop1 = rate_from_snr(sig2 / w2);
    const double bound_hop2 = rate_from_snr(sig1);

    GapCertificate cert;
    cert.epsilon = 1.0;
    for (size_t i = 0; i < b1.size(); ++i) {
        if (b2[i] == 0.0) continue;  // silent relay contributes nothing
        const double r = b1[i] / b2[i];
        cert.epsilon = std::max(cert.epsilon, r * r);
    }

    const DominanceClass dom = classify_dominance(net);
    cert.dominance = dom.kind;
    switch (dom.kind) {
        case Dominance::UpperLayerDominant:
            cert.scheme = "pseudo-optimal";
            cert.rate = rate2;
            cert.bound = bound_hop1;
            cert.gap_bound = 0.5;
            break;
        case Dominance::LowerLayerDominant:
            cert.scheme = "max-gain";
            cert.rate = rate1;
            cert.bound = bound_hop2;
            cert.gap_bound = 0.5;
            break;
        case Dominance::Neither:
            if (rate1 >= rate2) {
                cert.scheme = "max-gain";
                cert.rate = rate1;
            } else {
                cert.scheme = "pseudo-optimal";
                cert.rate = rate2;
            }
            cert.bound = std::min(bound_hop1, bound_hop2);
            cert.gap_bound = 0.5 * std::log2(1.0 + cert.epsilon);
            break;
    }
    return cert;
}

}  // namespace anc
