#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "anc/oracle.hpp"
#include "anc/snr.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace anc;
using doctest::Approx;

namespace {

RelayDag diamond(double a) {
    RelayDag d;
    d.source = "S";
    d.dest = "D";
    d.source_power = 1.0;
    d.relay_caps = {{"r1", 1.0}, {"r2", 1.0}};
    d.edges = {{"S", "r1", 1.0}, {"S", "r2", 1.0}, {"r1", "D", a * a}, {"r2", "D", a}};
    d.finalize();
    return d;
}

RelayDag chain(std::vector<double> gains) {
    RelayDag d;
    d.source = "S";
    d.dest = "D";
    d.source_power = 1.0;
    std::vector<std::string> seq{"S"};
    for (size_t i = 0; i + 1 < gains.size(); ++i) {
        const std::string id = "r" + std::to_string(i);
        d.relay_caps[id] = 1.0;
        seq.push_back(id);
    }
    seq.push_back("D");
    for (size_t i = 0; i + 1 < seq.size(); ++i) d.edges.push_back({seq[i], seq[i + 1], gains[i]});
    d.finalize();
    return d;
}

}  // namespace

TEST_CASE("received power bound: direct evaluations") {
    const RelayDag d = chain({1.0, 1.0});
    CHECK(received_power_bound(d, "r0") == Approx(1.0).epsilon(1e-15));

    const RelayDag dia = diamond(1.0);  // both second-hop gains 1
    CHECK(received_power_bound(dia, "D") == Approx(4.0).epsilon(1e-15));

    CHECK_THROWS_AS(received_power_bound(d, "S"), std::invalid_argument);
    CHECK_THROWS_AS(received_power_bound(d, "nope"), std::invalid_argument);
}

TEST_CASE("received power bound matches the coherent worst case") {
    // three upstream nodes all transmitting the same unit-power symbol at
    // their caps: E[(sum h sqrt(P) u)^2] = (sum h sqrt(P))^2
    RandomStream rng(3);
    RelayDag d;
    d.source = "S";
    d.dest = "D";
    d.source_power = rng.log_uniform(0.5, 2.0);
    d.relay_caps = {{"a", rng.log_uniform(0.5, 2.0)},
                    {"b", rng.log_uniform(0.5, 2.0)},
                    {"c", rng.log_uniform(0.5, 2.0)}};
    d.edges = {{"S", "a", 1.0}, {"S", "b", 1.0}, {"S", "c", 1.0},
               {"a", "D", rng.log_uniform(0.5, 2.0)},
               {"b", "D", rng.log_uniform(0.5, 2.0)},
               {"c", "D", rng.log_uniform(0.5, 2.0)}};
    d.finalize();

    double amp = 0.0;
    for (const Edge& e : d.edges)
        if (e.to == "D") amp += e.gain * std::sqrt(d.relay_caps.at(e.from));
    double mc = 0.0;
    const int kSamples = 200000;
    RandomStream noise(99);
    for (int i = 0; i < kSamples; ++i) {
        const double u = noise.normal();
        mc += amp * u * amp * u;
    }
    mc /= kSamples;
    CHECK(received_power_bound(d, "D") == Approx(amp * amp).epsilon(1e-12));
    CHECK(mc == Approx(amp * amp).epsilon(0.02));
}

TEST_CASE("gain caps: unit two-hop relay gets 1/sqrt(2)") {
    const RelayDag d = chain({1.0, 1.0});
    const PowerProfile prof = power_profile(d);
    CHECK(prof.received_power.at("r0") == Approx(1.0));
    CHECK(prof.delta.at("r0") == Approx(1.0));
    CHECK(prof.gain_cap.at("r0") == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("gain caps approach sqrt(P/P_R) as received power grows") {
    RelayDag d;
    d.source = "S";
    d.dest = "D";
    d.source_power = 1e12;
    d.relay_caps = {{"r", 2.0}};
    d.edges = {{"S", "r", 1.0}, {"r", "D", 1.0}};
    d.finalize();
    const PowerProfile prof = power_profile(d);
    const double pr = prof.received_power.at("r");
    CHECK(prof.gain_cap.at("r") == Approx(std::sqrt(2.0 / pr)).epsilon(1e-10));
}

TEST_CASE("simulated transmit power at the caps never exceeds the limits") {
    RandomStream rng(17);
    for (int trial = 0; trial < 12; ++trial) {
        const RelayDag d = testgen::random_dag(rng, 9);
        const GainAssignment g = testgen::cap_gains(d);
        SimConfig cfg;
        cfg.samples = 40000;
        cfg.seed = 1000 + static_cast<std::uint64_t>(trial);
        const SimResult sim = monte_carlo_sim(d, g, cfg);
        for (const auto& [id, cap] : d.relay_caps) {
            CHECK(sim.node_power.at(id) <= cap + 3.0 * sim.node_power_se.at(id));
        }
    }
}

TEST_CASE("transfer coefficient on a chain is the plain product") {
    const RelayDag d = chain({3.0, 5.0});
    GainAssignment g;
    g.beta["r0"] = 2.0;
    CHECK(global_coefficient(d, g, "S", "D") == Approx(30.0).epsilon(1e-15));
    CHECK(global_coefficient(d, g, "r0", "D") == Approx(10.0).epsilon(1e-15));
    CHECK(global_coefficient(d, g, "S", "S") == 1.0);
    CHECK(global_coefficient(d, g, "D", "S") == 0.0);  // no path
}

TEST_CASE("transfer coefficient on the diamond matches path enumeration") {
    const RelayDag d = diamond(2.0);
    GainAssignment g;
    g.beta["r1"] = 1.0 / std::sqrt(2.0);
    g.beta["r2"] = 1.0 / std::sqrt(2.0);
    const double expect = 6.0 / std::sqrt(2.0);
    CHECK(global_coefficient(d, g, "S", "D") == Approx(expect).epsilon(1e-14));
    CHECK(testoracle::path_enum_coefficient(d, g, "S", "D") == Approx(expect).epsilon(1e-14));
}

TEST_CASE("layered transfer equals the dense matrix chain") {
    RandomStream rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const LayeredNetwork net = testgen::random_layered(rng, {2, 3, 2});
        GainAssignment g;
        for (const auto& layer : net.ids)
            for (const auto& id : layer) g.beta[id] = rng.uniform(0.1, 1.0);
        const double via_dag = global_coefficient(net.to_dag(), g, "S", "D");
        const double via_chain = testoracle::chain_source_coefficient(net, g);
        CHECK(via_dag == Approx(via_chain).epsilon(1e-12));
    }
}

TEST_CASE("recursion agrees with path enumeration on random dags") {
    RandomStream rng(31);
    int checked = 0;
    while (checked < 40) {
        const RelayDag d = testgen::random_dag(rng, 8);
        if (testoracle::count_paths(d, d.source, d.dest) > 8) continue;
        GainAssignment g;
        for (const auto& [id, cap] : d.relay_caps) g.beta[id] = rng.uniform(0.1, 2.0);
        CHECK(global_coefficient(d, g, d.source, d.dest) ==
              Approx(testoracle::path_enum_coefficient(d, g, d.source, d.dest))
                  .epsilon(1e-12));
        for (const auto& [id, cap] : d.relay_caps)
            CHECK(global_coefficient(d, g, id, d.dest) ==
                  Approx(testoracle::path_enum_coefficient(d, g, id, d.dest))
                      .epsilon(1e-12)
                      .scale(1.0));
        ++checked;
    }
}

TEST_CASE("zero gains give zero snr and unit noise") {
    const RelayDag d = diamond(2.0);
    GainAssignment g;
    g.beta["r1"] = 0.0;
    g.beta["r2"] = 0.0;
    const SnrBreakdown b = destination_snr(d, g);
    CHECK(b.snr == 0.0);
    CHECK(b.signal_power == 0.0);
    CHECK(b.relay_noise() == 0.0);
    CHECK(b.dest_noise == 1.0);
}

TEST_CASE("diamond snr is 18/11 at the cap gains") {
    const RelayDag d = diamond(2.0);
    const GainAssignment g = testgen::cap_gains(d);
    const SnrBreakdown b = destination_snr(d, g);
    CHECK(b.snr == Approx(18.0 / 11.0).epsilon(1e-14));

    SimConfig cfg;
    cfg.samples = 1000000;
    cfg.seed = 2024;
    const SimResult sim = monte_carlo_sim(d, g, cfg);
    CHECK(sim.snr == Approx(b.snr).epsilon(0.01));
}

TEST_CASE("breakdown is internally consistent and permutation invariant") {
    RandomStream rng(37);
    for (int trial = 0; trial < 25; ++trial) {
        const RelayDag d = testgen::random_dag(rng, 10);
        GainAssignment g;
        const PowerProfile prof = power_profile(d);
        for (const auto& [id, cap] : prof.gain_cap) g.beta[id] = rng.uniform(0.0, 1.0) * cap;
        const SnrBreakdown b = destination_snr(d, g);
        CHECK(b.snr ==
              Approx(b.signal_power / (b.relay_noise() + b.dest_noise)).epsilon(1e-12));

        // relabel every relay; layouts and orderings change, the value must not
        RelayDag renamed;
        renamed.source = d.source;
        renamed.dest = d.dest;
        renamed.source_power = d.source_power;
        auto rename = [&](const std::string& id) {
            if (id == d.source || id == d.dest) return id;
            return "zz_" + id;
        };
        for (const auto& [id, cap] : d.relay_caps) renamed.relay_caps[rename(id)] = cap;
        for (const Edge& e : d.edges)
            renamed.edges.push_back({rename(e.from), rename(e.to), e.gain});
        renamed.finalize();
        GainAssignment rg;
        for (const auto& [id, beta] : g.beta) rg.beta[rename(id)] = beta;
        CHECK(destination_snr(renamed, rg).snr == Approx(b.snr).epsilon(1e-12));
    }
}

TEST_CASE("ideal layer snr dominates the true snr and matches closed forms") {
    RandomStream rng(41);
    for (int trial = 0; trial < 25; ++trial) {
        const LayeredNetwork net = testgen::random_two_hop(rng, 3);
        GainAssignment g;
        const PowerProfile prof = power_profile(net);
        for (const auto& [id, cap] : prof.gain_cap) g.beta[id] = rng.uniform(0.05, 1.0) * cap;
        const SnrBreakdown b = destination_snr(net, g);
        for (int l0 = 1; l0 <= 2; ++l0) CHECK(ideal_layer_snr(net, g, l0) >= b.snr - 1e-12);

        // last layer: only destination noise
        CHECK(ideal_layer_snr(net, g, 2) == Approx(b.signal_power).epsilon(1e-12));

        // first layer: quadratic form in gamma = B h_out against the
        // received amplitudes
        Vec gamma, p;
        const Vec beta = layer_gains(net, g, 1);
        const Vec hl = net.h_last();
        const Vec h0 = net.h0();
        for (size_t i = 0; i < beta.size(); ++i) {
            gamma.push_back(beta[i] * hl[i]);
            p.push_back(h0[i] * std::sqrt(net.source_power));
        }
        CHECK(ideal_layer_snr(net, g, 1) ==
              Approx(testoracle::quadratic_form_snr(gamma, p)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(
        ideal_layer_snr(testgen::random_two_hop(rng, 2), GainAssignment{}, 3),
        std::invalid_argument);
}

TEST_CASE("cut snr specializes to the full snr and the layer snr") {
    RandomStream rng(43);
    const LayeredNetwork net = testgen::random_two_hop(rng, 3);
    const RelayDag d = net.to_dag();
    const GainAssignment g = testgen::cap_gains(d);
    const SnrBreakdown b = destination_snr(d, g);

    std::set<std::string> all;
    for (const auto& [id, c] : d.relay_caps) all.insert(id);
    std::set<std::string> with_dest = all;
    with_dest.insert(d.dest);
    CHECK(cut_snr(d, g, with_dest) == Approx(b.snr).epsilon(1e-12));
    CHECK(cut_snr(d, g, all) == Approx(ideal_layer_snr(net, g, 1)).epsilon(1e-12));
    CHECK(cut_snr(d, g, {d.dest}) == Approx(b.signal_power).epsilon(1e-12));

    CHECK_THROWS_AS(cut_snr(d, g, {}), std::invalid_argument);
    CHECK_THROWS_AS(cut_snr(d, g, {d.source}), std::invalid_argument);
}

TEST_CASE("cut snr on a chain matches the hand product formula") {
    const RelayDag d = chain({3.0, 5.0});
    GainAssignment g;
    g.beta["r0"] = 0.25;
    // signal (1*3*0.25*5)^2, relay noise via (0.25*5)^2
    const double expect = (3.0 * 0.25 * 5.0) * (3.0 * 0.25 * 5.0) /
                          ((0.25 * 5.0) * (0.25 * 5.0));
    CHECK(cut_snr(d, g, {"r0"}) == Approx(expect).epsilon(1e-14));
}

TEST_CASE("capacity map") {
    CHECK(rate_from_snr(0.0) == 0.0);
    CHECK(rate_from_snr(3.0) == Approx(1.0).epsilon(1e-15));
    CHECK(rate_from_snr(2.0) == Approx(0.5 * std::log2(3.0)).epsilon(1e-15));
    CHECK_THROWS_AS(rate_from_snr(-0.1), std::invalid_argument);
}

TEST_CASE("single-path snr is nondecreasing in each gain") {
    const RelayDag d = chain({1.5, 0.7, 2.0});
    const PowerProfile prof = power_profile(d);
    for (const auto& [vary, cap] : prof.gain_cap) {
        double prev = -1.0;
        for (int i = 0; i <= 20; ++i) {
            GainAssignment g = testgen::cap_gains(d);
            g.beta[vary] = cap * i / 20.0;
            const double snr = destination_snr(d, g).snr;
            CHECK(snr >= prev - 1e-15);
            prev = snr;
        }
    }
}

TEST_CASE("power profile entries satisfy their defining identities") {
    RandomStream rng(47);
    for (int trial = 0; trial < 20; ++trial) {
        const RelayDag d = testgen::random_dag(rng, 10);
        const PowerProfile prof = power_profile(d);
        for (const auto& [id, pr] : prof.received_power)
            CHECK(prof.delta.at(id) * pr == Approx(1.0).epsilon(1e-15));
        for (const auto& [id, cap] : prof.gain_cap) {
            const double pr = prof.received_power.at(id);
            CHECK(cap * cap ==
                  Approx(d.relay_caps.at(id) / ((1.0 + 1.0 / pr) * pr)).epsilon(1e-13));
        }
    }
}
