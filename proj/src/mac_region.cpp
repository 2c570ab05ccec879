#include "anc/mac_region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "anc/snr.hpp"

namespace anc {

namespace {

constexpr double kPi = 3.14159265358979323846;

double cap_bits(double snr) { return 0.5 * std::log2(1.0 + snr); }

struct Quadratics {
    double s1 = 0.0;   // (h1' B h01)^2 * P1
    double s2 = 0.0;   // (h1' B h02)^2 * P2
    double den = 0.0;  // h1' B B h1
};

Quadratics quadratics(const TwoHopMac& mac, const Vec& beta) {
    if (static_cast<int>(beta.size()) != mac.n)
        throw std::invalid_argument("gain vector length mismatch");
    Quadratics q;
    double a1 = 0.0, a2 = 0.0;
    for (int k = 0; k < mac.n; ++k) {
        const auto ks = static_cast<size_t>(k);
        const double v = mac.h1[ks] * beta[ks];
        a1 += v * mac.h01[ks];
        a2 += v * mac.h02[ks];
        q.den += v * v;
    }
    q.s1 = a1 * a1 * mac.ps1;
    q.s2 = a2 * a2 * mac.ps2;
    return q;
}

void check_pentagon(const MacRateSet& rs) {
    const double slack = 1e-9 * std::max(1.0, rs.cap1 + rs.cap2);
    if (rs.cap1 < -slack || rs.cap2 < -slack ||
        rs.cap_sum < std::max(rs.cap1, rs.cap2) - slack ||
        rs.cap_sum > rs.cap1 + rs.cap2 + slack)
        throw std::logic_error("rate set is not a valid pentagon");
}

// Upper-right boundary of the convex hull of a point cloud that already
// contains its axis intercepts.
RegionPolyline upper_right_boundary(std::vector<std::array<double, 2>> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    auto cross = [](const std::array<double, 2>& o, const std::array<double, 2>& a,
                    const std::array<double, 2>& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    // upper hull, left to right
    std::vector<std::array<double, 2>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) >= 0)
            hull.pop_back();
        hull.push_back(p);
    }
    // drop a leading vertical rise so the polyline starts at (0, ymax)
    while (hull.size() >= 2 && hull[0][0] == hull[1][0]) hull.erase(hull.begin());
    if (!hull.empty() && hull.back()[1] > 0.0) hull.push_back({hull.back()[0], 0.0});
    RegionPolyline out;
    out.pts = std::move(hull);
    return out;
}

}  // namespace

Vec mac_gain_caps(const TwoHopMac& mac) {
    Vec caps(static_cast<size_t>(mac.n));
    for (int k = 0; k < mac.n; ++k) {
        const auto ks = static_cast<size_t>(k);
        const double rcv = 1.0 + mac.h01[ks] * mac.h01[ks] * mac.ps1 +
                           mac.h02[ks] * mac.h02[ks] * mac.ps2;
        caps[ks] = std::sqrt(mac.caps[ks] / rcv);
    }
    return caps;
}

MacRateSet mac_rate_set(const TwoHopMac& mac, const Vec& beta, RateFamily family) {
    const Quadratics q = quadratics(mac, beta);
    if (family == RateFamily::Achievable) {
        const Vec caps = mac_gain_caps(mac);
        for (int k = 0; k < mac.n; ++k) {
            const auto ks = static_cast<size_t>(k);
            if (beta[ks] < 0 || beta[ks] > caps[ks] * (1.0 + 1e-12))
                throw std::invalid_argument("gain vector violates the relay power caps");
        }
    }
    MacRateSet rs;
    rs.family = family;
    switch (family) {
        case RateFamily::Achievable: {
            const double den = q.den + 1.0;
            rs.cap1 = cap_bits(q.s1 / den);
            rs.cap2 = cap_bits(q.s2 / den);
            rs.cap_sum = cap_bits((q.s1 + q.s2) / den);
            break;
        }
        case RateFamily::OuterNoDestNoise: {
            if (q.den == 0.0)
                throw std::invalid_argument("zero amplification vector has no noise-only rate set");
            rs.cap1 = cap_bits(q.s1 / q.den);
            rs.cap2 = cap_bits(q.s2 / q.den);
            rs.cap_sum = cap_bits((q.s1 + q.s2) / q.den);
            break;
        }
        case RateFamily::OuterNoRelayNoise: {
            rs.cap1 = cap_bits(q.s1);
            rs.cap2 = cap_bits(q.s2);
            rs.cap_sum = cap_bits(q.s1 + q.s2);
            break;
        }
    }
    check_pentagon(rs);
    return rs;
}

MacRateSet outer_bound_2(const TwoHopMac& mac) {
    MacRateSet rs = mac_rate_set(mac, mac_gain_caps(mac), RateFamily::OuterNoRelayNoise);
    rs.provenance = "no-relay-noise bound at cap gains";
    return rs;
}

ThetaFrame theta_frame(const TwoHopMac& mac) {
    const double n1 = norm(mac.h01);
    const double n2 = norm(mac.h02);
    Vec u1 = scaled(mac.h01, 1.0 / n1);
    Vec d2 = scaled(mac.h02, 1.0 / n2);
    const double c = dot(u1, d2);
    if (std::fabs(c) >= 1.0 - 1e-12)
        throw std::invalid_argument("parallel source channels: single effective source");
    Vec u2(d2.size());
    for (size_t i = 0; i < d2.size(); ++i) u2[i] = d2[i] - c * u1[i];
    const double nu2 = norm(u2);
    for (double& v : u2) v /= nu2;

    ThetaFrame f;
    f.u1 = std::move(u1);
    f.u2 = std::move(u2);
    f.alpha = 0.0;
    f.beta = std::acos(std::clamp(c, -1.0, 1.0));
    f.p1 = n1 * n1 * mac.ps1;
    f.p2 = n2 * n2 * mac.ps2;
    return f;
}

ThetaFrame make_frame(double alpha, double beta, double p1, double p2) {
    if (alpha > beta) std::swap(alpha, beta);
    if (alpha < 0 || beta > kPi / 2 || beta - alpha >= kPi / 2)
        throw std::invalid_argument("frame angles out of range");
    ThetaFrame f;
    f.alpha = alpha;
    f.beta = beta;
    f.p1 = p1;
    f.p2 = p2;
    return f;
}

Phi phi_eval(const ThetaFrame& frame, double theta) {
    Phi p;
    const double c1 = std::cos(theta - frame.alpha);
    const double c2 = std::cos(theta - frame.beta);
    p.phi1 = frame.p1 * c1 * c1;
    p.phi2 = frame.p2 * c2 * c2;
    p.phi = p.phi1 + p.phi2;
    return p;
}

std::pair<double, double> theta_sufficient_interval(const ThetaFrame& frame) {
    return {frame.alpha, frame.beta};
}

bool theta_interval_dominates(const ThetaFrame& frame, double theta, double tol) {
    if (theta >= frame.alpha && theta <= frame.beta) return true;
    // Dominating angles inside [alpha, beta]: the endpoints, and the
    // reflection of theta about beta - pi/2 when it lands inside.
    std::vector<double> candidates{frame.alpha, frame.beta};
    const double refl = 2.0 * frame.beta - kPi - theta;
    if (refl > frame.alpha && refl < frame.beta) candidates.push_back(refl);
    const Phi mine = phi_eval(frame, theta);
    for (const double cand : candidates) {
        const Phi c = phi_eval(frame, cand);
        if (mine.phi1 <= c.phi1 + tol && mine.phi2 <= c.phi2 + tol && mine.phi <= c.phi + tol)
            return true;
    }
    return false;
}

double theta_sum_opt(const ThetaFrame& frame) {
    const double num = frame.p1 * std::sin(2.0 * frame.alpha) + frame.p2 * std::sin(2.0 * frame.beta);
    const double den = frame.p1 * std::cos(2.0 * frame.alpha) + frame.p2 * std::cos(2.0 * frame.beta);
    const double theta = 0.5 * std::atan2(num, den);
    // stationarity of phi, as a guard against frame corruption
    const double d = -frame.p1 * std::sin(2.0 * (theta - frame.alpha)) -
                     frame.p2 * std::sin(2.0 * (theta - frame.beta));
    if (std::fabs(d) > 1e-10 * std::max(1.0, frame.p1 + frame.p2))
        throw std::logic_error("sum-rate angle is not stationary");
    return theta;
}

std::pair<double, double> theta_individual(const ThetaFrame& frame) {
    return {frame.alpha, frame.beta};
}

namespace {

// d/dtheta of mu*C(phi) + (mu_bar - mu)*C(phi2) for the upper-diagonal
// corner (mu < 1/2), and of the mirrored form for the lower corner.
double weighted_corner_slope(const ThetaFrame& f, double theta, double mu, bool upper) {
    const Phi p = phi_eval(f, theta);
    const double d1 = -f.p1 * std::sin(2.0 * (theta - f.alpha));
    const double d2 = -f.p2 * std::sin(2.0 * (theta - f.beta));
    const double dphi = d1 + d2;
    if (upper) {
        return mu * dphi / (1.0 + p.phi) + (1.0 - 2.0 * mu) * d2 / (1.0 + p.phi2);
    }
    return (1.0 - mu) * dphi / (1.0 + p.phi) + (2.0 * mu - 1.0) * d1 / (1.0 + p.phi1);
}

}  // namespace

ThetaRoot theta_weighted(const ThetaFrame& frame, double mu) {
    if (mu < 0.0 || mu > 1.0) throw std::invalid_argument("weight must lie in [0, 1]");
    ThetaRoot out;
    if (mu == 1.0) {
        out.theta = frame.alpha;
        return out;
    }
    if (mu == 0.0) {
        out.theta = frame.beta;
        return out;
    }
    const double mid = theta_sum_opt(frame);
    if (mu == 0.5) {
        out.theta = mid;
        return out;
    }
    const bool upper = mu < 0.5;
    double lo = upper ? mid : frame.alpha;
    double hi = upper ? frame.beta : mid;
    double flo = weighted_corner_slope(frame, lo, mu, upper);
    double fhi = weighted_corner_slope(frame, hi, mu, upper);
    if (flo == 0.0) {
        out.theta = lo;
        return out;
    }
    if (fhi == 0.0) {
        out.theta = hi;
        return out;
    }
    if ((flo > 0) == (fhi > 0)) {
        out.degenerate = true;
        out.theta = std::fabs(flo) < std::fabs(fhi) ? lo : hi;
        return out;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double m = 0.5 * (lo + hi);
        const double fm = weighted_corner_slope(frame, m, mu, upper);
        if (fm == 0.0) {
            lo = hi = m;
            break;
        }
        if ((fm > 0) == (flo > 0)) {
            lo = m;
            flo = fm;
        } else {
            hi = m;
        }
    }
    out.theta = 0.5 * (lo + hi);
    return out;
}

Vec gains_from_theta(const TwoHopMac& mac, double theta) {
    const ThetaFrame f = theta_frame(mac);
    Vec x(f.u1.size());
    for (size_t i = 0; i < x.size(); ++i)
        x[i] = std::cos(theta) * f.u1[i] + std::sin(theta) * f.u2[i];
    for (int k = 0; k < mac.n; ++k)
        if (mac.h1[static_cast<size_t>(k)] == 0.0)
            throw std::domain_error("zero relay->destination gain");
    bool any_pos = false, any_neg = false;
    for (const double v : x) {
        if (v > 1e-14) any_pos = true;
        if (v < -1e-14) any_neg = true;
    }
    if (any_pos && any_neg)
        throw std::domain_error("direction is sign-infeasible for nonnegative gains");
    if (any_neg)
        for (double& v : x) v = -v;  // the mirrored direction spans the same rate set

    const Vec caps = mac_gain_caps(mac);
    double c = std::numeric_limits<double>::infinity();
    for (int k = 0; k < mac.n; ++k) {
        const auto ks = static_cast<size_t>(k);
        if (x[ks] <= 1e-300) continue;
        c = std::min(c, caps[ks] * mac.h1[ks] / x[ks]);
    }
    if (!std::isfinite(c)) throw std::domain_error("zero direction");
    Vec beta(static_cast<size_t>(mac.n), 0.0);
    for (int k = 0; k < mac.n; ++k) {
        const auto ks = static_cast<size_t>(k);
        beta[ks] = x[ks] > 1e-300 ? c * x[ks] / mac.h1[ks] : 0.0;
    }
    return beta;
}

double RegionPolyline::max_r1() const {
    double m = 0.0;
    for (const auto& p : pts) m = std::max(m, p[0]);
    return m;
}

double RegionPolyline::max_r2() const {
    double m = 0.0;
    for (const auto& p : pts) m = std::max(m, p[1]);
    return m;
}

double RegionPolyline::max_sum() const {
    double m = 0.0;
    for (const auto& p : pts) m = std::max(m, p[0] + p[1]);
    return m;
}

double RegionPolyline::r2_at(double r1) const {
    if (pts.empty() || r1 < 0.0) return 0.0;
    if (r1 <= pts.front()[0]) return pts.front()[1];
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        if (r1 > pts[i + 1][0]) continue;
        const double x0 = pts[i][0], x1 = pts[i + 1][0];
        if (x1 - x0 <= 1e-300) return std::min(pts[i][1], pts[i + 1][1]);
        const double t = (r1 - x0) / (x1 - x0);
        return pts[i][1] + t * (pts[i + 1][1] - pts[i][1]);
    }
    return 0.0;
}

RegionPolyline pentagon_boundary(const MacRateSet& rs) {
    const double a = rs.cap1;
    const double b = rs.cap2;
    const double c = std::min(rs.cap_sum, a + b);
    RegionPolyline out;
    out.pts.push_back({0.0, b});
    if (c < a + b) {
        if (c - b > 1e-15) out.pts.push_back({c - b, b});
        if (a - (c - b) > 1e-15) out.pts.push_back({a, c - a});
    } else {
        out.pts.push_back({a, b});
    }
    out.pts.push_back({a, 0.0});
    return out;
}

std::array<double, 2> corner_upper_nats(const ThetaFrame& frame, double theta) {
    const Phi p = phi_eval(frame, theta);
    return {0.5 * (std::log1p(p.phi) - std::log1p(p.phi2)), 0.5 * std::log1p(p.phi2)};
}

RegionPolyline outer_boundary_1(const ThetaFrame& frame, int resolution) {
    if (resolution < 2) throw std::invalid_argument("resolution must be at least 2");
    const double ts = theta_sum_opt(frame);
    std::vector<std::array<double, 2>> pts;
    const Phi at_beta = phi_eval(frame, frame.beta);
    pts.push_back({0.0, cap_bits(at_beta.phi2)});
    // upper-diagonal corner arc, theta from beta down to the sum optimum
    for (int i = 0; i < resolution; ++i) {
        const double theta = frame.beta + (ts - frame.beta) * i / (resolution - 1);
        const Phi p = phi_eval(frame, theta);
        pts.push_back({cap_bits(p.phi) - cap_bits(p.phi2), cap_bits(p.phi2)});
    }
    // lower-diagonal corner arc, theta from the sum optimum down to alpha
    for (int i = 0; i < resolution; ++i) {
        const double theta = ts + (frame.alpha - ts) * i / (resolution - 1);
        const Phi p = phi_eval(frame, theta);
        pts.push_back({cap_bits(p.phi1), cap_bits(p.phi) - cap_bits(p.phi1)});
    }
    const Phi at_alpha = phi_eval(frame, frame.alpha);
    pts.push_back({cap_bits(at_alpha.phi1), 0.0});

    if (frame.beta - frame.alpha > kPi / 4 + 1e-15) {
        // concavity of the corner arcs is only guaranteed for narrow
        // angle spreads; time sharing convexifies the rest
        return upper_right_boundary(std::move(pts));
    }
    std::vector<std::array<double, 2>> dedup;
    for (const auto& p : pts)
        if (dedup.empty() || std::fabs(p[0] - dedup.back()[0]) > 1e-14 ||
            std::fabs(p[1] - dedup.back()[1]) > 1e-14)
            dedup.push_back(p);
    RegionPolyline out;
    out.pts = std::move(dedup);
    return out;
}

ConcavityDiag concavity_diagnostics(const ThetaFrame& frame, double theta) {
    const Phi p = phi_eval(frame, theta);
    const double d1 = -frame.p1 * std::sin(2.0 * (theta - frame.alpha));
    const double d2 = -frame.p2 * std::sin(2.0 * (theta - frame.beta));
    const double dd1 = -2.0 * frame.p1 * std::cos(2.0 * (theta - frame.alpha));
    const double dd2 = -2.0 * frame.p2 * std::cos(2.0 * (theta - frame.beta));
    const double dphi = d1 + d2;
    const double ddphi = dd1 + dd2;
    if (std::fabs(d2) < 1e-300)
        throw std::invalid_argument("curvature is singular where phi2 is stationary");
    ConcavityDiag g;
    g.g2 = dphi * (1.0 + p.phi2) - d2 * (1.0 + p.phi);
    g.g3 = ddphi * d2 - dphi * dd2;
    g.g4 = dphi * d2;
    g.g1 = dphi * (1.0 + p.phi2) / ((1.0 + p.phi) * d2) - 1.0;
    const double a = g.g3 * (1.0 + p.phi) * (1.0 + p.phi2) - g.g2 * g.g4;
    const double b = (1.0 + p.phi) * d2;
    g.d2y_dx2 = -(a / g.g2) * (2.0 * (1.0 + p.phi) * (1.0 + p.phi2)) / (b * b * g.g1 * g.g1);
    return g;
}

std::vector<Vec> default_mac_schemes(const TwoHopMac& mac) {
    const ThetaFrame f = theta_frame(mac);
    std::vector<Vec> out;
    for (const double theta : {theta_sum_opt(f), f.alpha, f.beta}) {
        try {
            out.push_back(gains_from_theta(mac, theta));
        } catch (const std::domain_error&) {
            out.push_back(mac_gain_caps(mac));  // fall back to the cap scheme
        }
    }
    out.push_back(mac_gain_caps(mac));
    return out;
}

RegionPolyline dynamic_inner_region(const TwoHopMac& mac, const std::vector<Vec>& schemes) {
    if (schemes.empty()) throw std::invalid_argument("empty scheme list");
    std::vector<std::array<double, 2>> pts{{0.0, 0.0}};
    for (const Vec& beta : schemes) {
        const MacRateSet rs = mac_rate_set(mac, beta, RateFamily::Achievable);
        for (const auto& p : pentagon_boundary(rs).pts) pts.push_back(p);
    }
    return upper_right_boundary(std::move(pts));
}

std::array<double, 3> region_gaps(const RegionPolyline& inner, const RegionPolyline& outer) {
    return {outer.max_r1() - inner.max_r1(), outer.max_r2() - inner.max_r2(),
            outer.max_sum() - inner.max_sum()};
}

RegionPolyline outer_bound_intersection(const TwoHopMac& mac, int resolution) {
    const RegionPolyline o1 = outer_boundary_1(theta_frame(mac), resolution);
    const RegionPolyline o2 = pentagon_boundary(outer_bound_2(mac));
    const double xmax = std::min(o1.max_r1(), o2.max_r1());
    RegionPolyline out;
    const int steps = std::max(resolution, 2);
    for (int i = 0; i < steps; ++i) {
        const double x = xmax * i / (steps - 1);
        out.pts.push_back({x, std::min(o1.r2_at(x), o2.r2_at(x))});
    }
    if (out.pts.back()[1] > 0.0) out.pts.push_back({xmax, 0.0});
    return out;
}

}  // namespace anc
