#ifndef ANC_MAC_REGION_HPP
#define ANC_MAC_REGION_HPP

#include <array>
#include <string>
#include <vector>

#include "anc/network.hpp"

namespace anc {

// Largest feasible amplification gain per relay of a two-source relay layer.
Vec mac_gain_caps(const TwoHopMac& mac);

enum class RateFamily {
    Achievable,        // full noise at the destination
    OuterNoDestNoise,  // destination's own noise omitted
    OuterNoRelayNoise  // propagated relay noise omitted
};

// Pentagon rate set {R1 <= cap1, R2 <= cap2, R1+R2 <= cap_sum} of one AF
// scheme under the chosen noise accounting.
struct MacRateSet {
    double cap1 = 0.0;
    double cap2 = 0.0;
    double cap_sum = 0.0;
    RateFamily family = RateFamily::Achievable;
    std::string provenance;
};

MacRateSet mac_rate_set(const TwoHopMac& mac, const Vec& beta, RateFamily family);

// The single rate set that dominates the whole no-relay-noise family.
MacRateSet outer_bound_2(const TwoHopMac& mac);

// Orthonormal coordinates for the plane spanned by the two source->relay
// channel vectors; everything about the first outer bound reduces to the
// two angles and the absorbed powers.
struct ThetaFrame {
    Vec u1, u2;          // empty for synthetic frames
    double alpha = 0.0;  // angle of channel 1, alpha <= beta
    double beta = 0.0;   // angle of channel 2
    double p1 = 0.0;     // ||h01||^2 * P_S1
    double p2 = 0.0;     // ||h02||^2 * P_S2
};

ThetaFrame theta_frame(const TwoHopMac& mac);
ThetaFrame make_frame(double alpha, double beta, double p1, double p2);

struct Phi {
    double phi1 = 0.0;
    double phi2 = 0.0;
    double phi = 0.0;
};

Phi phi_eval(const ThetaFrame& frame, double theta);

// The angle range that suffices for the first outer bound, plus the
// verifier that a given angle's rate set is dominated inside it.
std::pair<double, double> theta_sufficient_interval(const ThetaFrame& frame);
bool theta_interval_dominates(const ThetaFrame& frame, double theta, double tol = 1e-9);

double theta_sum_opt(const ThetaFrame& frame);                     // maximizes phi
std::pair<double, double> theta_individual(const ThetaFrame& frame);  // (alpha, beta)

struct ThetaRoot {
    double theta = 0.0;
    bool degenerate = false;  // no bracketed root; nearest endpoint returned
};

// Angle maximizing mu*R1 + (1-mu)*R2 over the first outer bound's corners.
ThetaRoot theta_weighted(const ThetaFrame& frame, double mu);

// Gains realizing amplification direction theta, scaled until the binding
// relay hits its cap. Throws when the direction has mixed signs after
// dividing by the relay->destination gains.
Vec gains_from_theta(const TwoHopMac& mac, double theta);

// Boundary of a convex rate region from the R2 axis to the R1 axis,
// vertices in ascending R1, R2 nonincreasing.
struct RegionPolyline {
    std::vector<std::array<double, 2>> pts;

    double max_r1() const;
    double max_r2() const;
    double max_sum() const;
    double r2_at(double r1) const;  // boundary height; 0 beyond the R1 extent
};

RegionPolyline pentagon_boundary(const MacRateSet& rs);
RegionPolyline outer_boundary_1(const ThetaFrame& frame, int resolution);

// Corner-point parametrization of the upper-diagonal arc in natural-log
// rate units, and the algebra behind its curvature.
std::array<double, 2> corner_upper_nats(const ThetaFrame& frame, double theta);

struct ConcavityDiag {
    double g1 = 0.0;
    double g2 = 0.0;
    double g3 = 0.0;
    double g4 = 0.0;
    double d2y_dx2 = 0.0;
};

ConcavityDiag concavity_diagnostics(const ThetaFrame& frame, double theta);

// Time-shared region of finitely many stored AF schemes.
RegionPolyline dynamic_inner_region(const TwoHopMac& mac, const std::vector<Vec>& schemes);
std::vector<Vec> default_mac_schemes(const TwoHopMac& mac);

// (outer - inner) differences of max R1, max R2, max sum.
std::array<double, 3> region_gaps(const RegionPolyline& inner, const RegionPolyline& outer);

RegionPolyline outer_bound_intersection(const TwoHopMac& mac, int resolution);

}  // namespace anc

#endif
