#include "anc/snr.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace anc {

namespace {

// Transfer amplitudes out of node `from`: f[k] solves the local recursion
// f[from]=1, f[k] = sum over upstream j of f[j]*beta_j*h_{j,k}. The sweep
// applies beta_j when a path leaves node j, so f[k] already includes the
// starting node's own gain (fixed to 1 at the source) and excludes the
// receiving node's.
std::vector<double> forward_coefficients(const RelayDag& net, const GainAssignment& gains,
                                         int from) {
    std::vector<double> f(net.nodes.size(), 0.0);
    f[static_cast<size_t>(from)] = 1.0;
    for (const int k : net.topo) {
        if (k == from) continue;
        double acc = 0.0;
        for (const auto& [j, h] : net.in_edges[static_cast<size_t>(k)]) {
            if (f[static_cast<size_t>(j)] == 0.0) continue;
            const std::string& jid = net.nodes[static_cast<size_t>(j)];
            const double beta = jid == net.source ? 1.0 : gains.at(jid);
            acc += f[static_cast<size_t>(j)] * beta * h;
        }
        f[static_cast<size_t>(k)] = acc;
    }
    return f;
}

// Downstream closure r[j]: the gain a signal picks up from node j's
// *output* to the destination (amplifications apply at every intermediate
// node, not at j itself). Then f_{j,D} = beta_j * r[j] and f_{S,D} = r[S].
std::vector<double> downstream_closure(const RelayDag& net, const GainAssignment& gains) {
    std::vector<double> r(net.nodes.size(), 0.0);
    const int dest = net.index.at(net.dest);
    r[static_cast<size_t>(dest)] = 1.0;
    for (auto it = net.topo.rbegin(); it != net.topo.rend(); ++it) {
        const int j = *it;
        if (j == dest) continue;
        double acc = 0.0;
        for (const auto& [k, h] : net.out_edges[static_cast<size_t>(j)]) {
            if (k == dest) {
                acc += h * r[static_cast<size_t>(k)];
            } else {
                acc += h * gains.at(net.nodes[static_cast<size_t>(k)]) * r[static_cast<size_t>(k)];
            }
        }
        r[static_cast<size_t>(j)] = acc;
    }
    return r;
}

}  // namespace

double received_power_bound(const RelayDag& net, const std::string& node) {
    auto it = net.index.find(node);
    if (it == net.index.end()) throw std::invalid_argument("unknown node " + node);
    if (node == net.source)
        throw std::invalid_argument("received power bound is undefined at the source");
    double amp = 0.0;
    for (const auto& [j, h] : net.in_edges[static_cast<size_t>(it->second)]) {
        const std::string& jid = net.nodes[static_cast<size_t>(j)];
        const double p = jid == net.source ? net.source_power : net.relay_caps.at(jid);
        amp += h * std::sqrt(p);
    }
    return amp * amp;
}

PowerProfile power_profile(const RelayDag& net) {
    PowerProfile prof;
    for (const int k : net.topo) {
        const std::string& id = net.nodes[static_cast<size_t>(k)];
        if (id == net.source) continue;
        const double pr = received_power_bound(net, id);
        prof.received_power[id] = pr;
        prof.delta[id] = 1.0 / pr;
        if (net.is_relay(id)) {
            const double cap = net.relay_caps.at(id);
            prof.gain_cap[id] = std::sqrt(cap / ((1.0 + 1.0 / pr) * pr));
        }
    }
    return prof;
}

PowerProfile power_profile(const LayeredNetwork& net) { return power_profile(net.to_dag()); }

double global_coefficient(const RelayDag& net, const GainAssignment& gains,
                          const std::string& j, const std::string& k) {
    auto ji = net.index.find(j);
    auto ki = net.index.find(k);
    if (ji == net.index.end()) throw std::invalid_argument("unknown node " + j);
    if (ki == net.index.end()) throw std::invalid_argument("unknown node " + k);
    if (j == k) return 1.0;
    const std::vector<double> f = forward_coefficients(net, gains, ji->second);
    return f[static_cast<size_t>(ki->second)];
}

SnrBreakdown destination_snr(const RelayDag& net, const GainAssignment& gains) {
    const std::vector<double> r = downstream_closure(net, gains);
    SnrBreakdown b;
    const double f_sd = r[static_cast<size_t>(net.index.at(net.source))];
    b.signal_power = f_sd * f_sd * net.source_power;
    for (const auto& [id, _] : net.relay_caps) {
        const double f = gains.at(id) * r[static_cast<size_t>(net.index.at(id))];
        b.per_source_noise[id] = f * f;
    }
    b.dest_noise = 1.0;
    b.snr = b.signal_power / (b.relay_noise() + b.dest_noise);
    return b;
}

SnrBreakdown destination_snr(const LayeredNetwork& net, const GainAssignment& gains) {
    SnrBreakdown b = destination_snr(net.to_dag(), gains);
    b.per_layer_noise.assign(static_cast<size_t>(std::max(0, net.layer_count() - 1)), 0.0);
    for (int l = 1; l < net.layer_count(); ++l)
        for (const std::string& id : net.ids[static_cast<size_t>(l) - 1])
            b.per_layer_noise[static_cast<size_t>(l) - 1] += b.per_source_noise.at(id);
    return b;
}

double ideal_layer_snr(const LayeredNetwork& net, const GainAssignment& gains, int l0) {
    const int L = net.layer_count();
    if (l0 < 1 || l0 > L) throw std::invalid_argument("layer index out of range");
    const SnrBreakdown b = destination_snr(net, gains);
    if (l0 == L) return b.signal_power / b.dest_noise;
    const double noise = b.per_layer_noise[static_cast<size_t>(l0) - 1];
    if (noise == 0.0) {
        if (b.signal_power == 0.0) return 0.0;
        return std::numeric_limits<double>::infinity();
    }
    return b.signal_power / noise;
}

double cut_snr(const RelayDag& net, const GainAssignment& gains,
               const std::set<std::string>& cut_nodes) {
    if (cut_nodes.empty()) throw std::invalid_argument("empty cut node set");
    if (cut_nodes.count(net.source))
        throw std::invalid_argument("cut node set must not contain the source");
    const SnrBreakdown b = destination_snr(net, gains);
    double noise = 0.0;
    for (const std::string& id : cut_nodes) {
        if (id == net.dest) {
            noise += 1.0;
        } else if (net.is_relay(id)) {
            noise += b.per_source_noise.at(id);
        } else {
            throw std::invalid_argument("cut node " + id + " is not a relay or the destination");
        }
    }
    if (noise == 0.0) {
        if (b.signal_power == 0.0) return 0.0;
        return std::numeric_limits<double>::infinity();
    }
    return b.signal_power / noise;
}

double rate_from_snr(double snr) {
    if (snr < 0) throw std::invalid_argument("negative snr");
    return 0.5 * std::log2(1.0 + snr);
}

}  // namespace anc
