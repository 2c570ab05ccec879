#ifndef ANC_TESTS_ORACLES_HPP
#define ANC_TESTS_ORACLES_HPP

// Independent brute-force computations used to freeze expected values.
// Everything here deliberately avoids the library's production code paths.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "anc/mac_region.hpp"
#include "anc/network.hpp"

namespace anc::testoracle {

// Path-enumeration transfer coefficient: walk every j->k path and sum the
// products of (gain at the transmitting node) * (channel gain).
inline double path_enum_coefficient(const RelayDag& net, const GainAssignment& gains,
                                    const std::string& j, const std::string& k) {
    double total = 0.0;
    std::function<void(int, double)> walk = [&](int node, double partial) {
        if (net.nodes[static_cast<size_t>(node)] == k) {
            total += partial;
            return;
        }
        const std::string& id = net.nodes[static_cast<size_t>(node)];
        const double beta = id == net.source ? 1.0 : gains.at(id);
        for (const auto& [next, h] : net.out_edges[static_cast<size_t>(node)])
            walk(next, partial * beta * h);
    };
    if (j == k) return 1.0;
    walk(net.index.at(j), 1.0);
    return total;
}

inline long count_paths(const RelayDag& net, const std::string& j, const std::string& k) {
    long total = 0;
    std::function<void(int)> walk = [&](int node) {
        if (net.nodes[static_cast<size_t>(node)] == k) {
            ++total;
            return;
        }
        for (const auto& [next, h] : net.out_edges[static_cast<size_t>(node)]) walk(next);
    };
    walk(net.index.at(j));
    return total;
}

// Dense matrix-chain transfer through a layered network: the product of
// access row, per-layer diagonal gains and hop matrices, broadcast column.
inline double chain_source_coefficient(const LayeredNetwork& net, const GainAssignment& g) {
    Vec v = net.h0();  // amplitudes arriving at layer 1
    for (int l = 1; l < net.layer_count(); ++l) {
        const Vec beta = layer_gains(net, g, l);
        for (size_t i = 0; i < v.size(); ++i) v[i] *= beta[i];
        v = matvec(net.hops[static_cast<size_t>(l)], v);
    }
    return v[0];
}

// Generalized Rayleigh quotient (g'P)^2 / g'g for the layer-noise-only
// destination SNR.
inline double quadratic_form_snr(const Vec& gamma, const Vec& p) {
    const double num = dot(gamma, p);
    return num * num / dot(gamma, gamma);
}

// Containment of one pentagon rate set in another: every vertex of the
// first satisfies the second's three constraints.
inline bool pentagon_contained(const MacRateSet& inner, const MacRateSet& outer, double tol) {
    const RegionPolyline b = pentagon_boundary(inner);
    for (const auto& v : b.pts) {
        if (v[0] > outer.cap1 + tol) return false;
        if (v[1] > outer.cap2 + tol) return false;
        if (v[0] + v[1] > outer.cap_sum + tol) return false;
    }
    return true;
}

// Centered second difference of the corner arc y(x), sampled at equal
// x spacing by inverting theta -> x with bisection. The step adapts to the
// local extent of the arc and a Richardson pass removes the leading
// truncation term.
inline double corner_second_difference(const ThetaFrame& frame, double theta) {
    auto x_of = [&](double t) { return corner_upper_nats(frame, t)[0]; };
    auto y_of = [&](double t) { return corner_upper_nats(frame, t)[1]; };
    const double x0 = x_of(theta);
    const double ts = theta_sum_opt(frame);
    // x decreases in theta on the upper arc: invert by bisection
    auto theta_at = [&](double x) {
        double lo = ts, hi = frame.beta;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (x_of(mid) > x) lo = mid; else hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    const double span = std::min(x_of(ts) - x0, x0 - x_of(frame.beta));
    const double h = std::max(1e-5, 0.02 * span);
    auto second = [&](double step) {
        const double ym = y_of(theta_at(x0 - step));
        const double y0 = y_of(theta);
        const double yp = y_of(theta_at(x0 + step));
        return (yp - 2.0 * y0 + ym) / (step * step);
    };
    const double coarse = second(h);
    const double fine = second(0.5 * h);
    return (4.0 * fine - coarse) / 3.0;
}

}  // namespace anc::testoracle

#endif
