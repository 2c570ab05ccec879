#include <doctest.h>

#include <cmath>

#include "anc/bounds.hpp"
#include "anc/oracle.hpp"
#include "anc/schemes.hpp"
#include "anc/snr.hpp"
#include "generators.hpp"

using namespace anc;
using doctest::Approx;

namespace {

// two relays, unit first hop, second hop (a^2, a), unit caps and source power
LayeredNetwork two_hop_family(double a) {
    LayeredNetwork net;
    net.source_power = 1.0;
    Mat h0(2, 1), hl(1, 2);
    h0(0, 0) = 1.0;
    h0(1, 0) = 1.0;
    hl(0, 0) = a * a;
    hl(0, 1) = a;
    net.hops = {h0, hl};
    net.caps = {{1.0, 1.0}};
    net.finalize();
    return net;
}

// mirrored family: first hop (a^2, a), unit second hop
LayeredNetwork two_hop_family_mirror(double a) {
    LayeredNetwork net;
    net.source_power = 1.0;
    Mat h0(2, 1), hl(1, 2);
    h0(0, 0) = a * a;
    h0(1, 0) = a;
    hl(0, 0) = 1.0;
    hl(0, 1) = 1.0;
    net.hops = {h0, hl};
    net.caps = {{1.0, 1.0}};
    net.finalize();
    return net;
}

double bisect(double lo, double hi, const std::function<double(double)>& f) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((f(mid) > 0) == (f(hi) > 0)) hi = mid; else lo = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("per-layer bounds of the unit two-hop fixture") {
    const double a = 2.0;
    const UpperBoundReport rep = anc_upper_bound(two_hop_family(a));
    CHECK(rep.layer_bounds[0] == Approx(0.5 * std::log2(3.0)).epsilon(1e-15));
    const double p = (a * a + a) * (a * a + a);
    CHECK(rep.layer_bounds[1] == Approx(0.5 * std::log2(1.0 + p)).epsilon(1e-15));
    CHECK(rep.argmin_layer == 1);
    CHECK(rep.value == rep.layer_bounds[0]);
    CHECK(rep.layer_received_power[0] == Approx(2.0));
    CHECK(rep.layer_received_power[1] == Approx(p));
}

TEST_CASE("bound crossover sits at the root of the received-power equation") {
    // layer bounds tie where (a^2+a)^2 = 2
    const double root = bisect(0.5, 1.0, [](double a) { return (a * a + a) * (a * a + a) - 2.0; });
    CHECK(root == Approx(0.790044015672758).epsilon(1e-12));
    CHECK(root == Approx((-1.0 + std::sqrt(1.0 + 4.0 * std::sqrt(2.0))) / 2.0).epsilon(1e-14));
    const UpperBoundReport below = anc_upper_bound(two_hop_family(root - 1e-3));
    const UpperBoundReport above = anc_upper_bound(two_hop_family(root + 1e-3));
    CHECK(below.argmin_layer == 2);
    CHECK(above.argmin_layer == 1);
    const UpperBoundReport at = anc_upper_bound(two_hop_family(root));
    CHECK(at.layer_bounds[0] == Approx(at.layer_bounds[1]).epsilon(1e-9));
}

TEST_CASE("mirrored family crossover lands on 1.2496") {
    // layer bounds tie where a^4 + a^2 = 4
    const double root = bisect(1.0, 1.5, [](double a) {
        return a * a * (1.0 + a * a) - 4.0;
    });
    CHECK(root == Approx(std::sqrt((std::sqrt(17.0) - 1.0) / 2.0)).epsilon(1e-12));
    CHECK(root == Approx(1.2496).epsilon(1e-4));
    const UpperBoundReport rep = anc_upper_bound(two_hop_family_mirror(2.0));
    CHECK(rep.layer_bounds[1] == Approx(0.5 * std::log2(5.0)).epsilon(1e-15));
    CHECK(rep.argmin_layer == 2);
}

TEST_CASE("general cut bound with layer cuts matches the closed form when hop one binds") {
    LayeredNetwork net;
    net.source_power = 1.0;
    Mat h0(2, 1), hl(1, 2);
    h0(0, 0) = 1.0;
    h0(1, 0) = 0.6;
    hl(0, 0) = 10.0;
    hl(0, 1) = 12.0;
    net.hops = {h0, hl};
    net.caps = {{1.0, 2.0}};
    net.finalize();
    const RelayDag dag = net.to_dag();
    std::set<std::string> layer1(net.ids[0].begin(), net.ids[0].end());
    const std::set<std::string> dest{dag.dest};
    const CutBoundResult res = general_cut_upper_bound(dag, {layer1, dest});
    const UpperBoundReport closed = anc_upper_bound(net);
    CHECK(closed.argmin_layer == 1);
    CHECK(res.value == Approx(closed.value).epsilon(1e-6));
    CHECK(res.note == "numeric, not closed-form");
}

TEST_CASE("destination-only cut is maximized at the caps") {
    RandomStream rng(71);
    for (int trial = 0; trial < 5; ++trial) {
        const LayeredNetwork net = testgen::random_two_hop(rng, 2);
        const RelayDag dag = net.to_dag();
        const CutBoundResult res = general_cut_upper_bound(dag, {{dag.dest}});
        const double at_caps = destination_snr(dag, testgen::cap_gains(dag)).signal_power;
        CHECK(res.value == Approx(rate_from_snr(at_caps)).epsilon(1e-6));
    }
}

TEST_CASE("single relay chain: minimum of the two hand closed forms") {
    RelayDag d;
    d.source = "S";
    d.dest = "D";
    d.source_power = 1.7;
    d.relay_caps = {{"r", 0.8}};
    d.edges = {{"S", "r", 1.3}, {"r", "D", 0.9}};
    d.finalize();
    const double cap = power_profile(d).gain_cap.at("r");
    const double hop1 = 1.3 * 1.3 * 1.7;  // constant in beta
    const double hop2 = (1.3 * cap * 0.9) * (1.3 * cap * 0.9) * 1.7;
    const CutBoundResult res = general_cut_upper_bound(d, {{"r"}, {"D"}});
    CHECK(res.value ==
          Approx(std::min(rate_from_snr(hop1), rate_from_snr(hop2))).epsilon(1e-6));
}

TEST_CASE("per-cut numeric bound never exceeds the closed form") {
    RandomStream rng(73);
    for (int trial = 0; trial < 5; ++trial) {
        const LayeredNetwork net = testgen::random_layered(rng, {2, 2});
        const RelayDag dag = net.to_dag();
        const UpperBoundReport closed = anc_upper_bound(net);
        for (int l0 = 1; l0 <= 3; ++l0) {
            std::set<std::string> J;
            if (l0 == 3) {
                J.insert(dag.dest);
            } else {
                J.insert(net.ids[static_cast<size_t>(l0) - 1].begin(),
                         net.ids[static_cast<size_t>(l0) - 1].end());
            }
            const CutBoundResult res = general_cut_upper_bound(dag, {J});
            CHECK(res.value <= closed.layer_bounds[static_cast<size_t>(l0) - 1] + 1e-9);
        }
    }
}

TEST_CASE("inadmissible cut sets are rejected") {
    const LayeredNetwork net = two_hop_family(1.0);
    const RelayDag dag = net.to_dag();
    CHECK_THROWS_AS(general_cut_upper_bound(dag, {{}}), std::invalid_argument);
    CHECK_THROWS_AS(general_cut_upper_bound(dag, {{dag.source}}), std::invalid_argument);
    // one relay of the pair does not separate source from destination
    CHECK_THROWS_AS(general_cut_upper_bound(dag, {{net.ids[0][0]}}), std::invalid_argument);
}

TEST_CASE("cooperative bound at the first hop equals the layer bound") {
    RandomStream rng(79);
    for (int trial = 0; trial < 10; ++trial) {
        const LayeredNetwork net = testgen::random_layered(rng, {3, 2});
        const Vec h0 = net.h0();
        const double expect = rate_from_snr(dot(h0, h0) * net.source_power);
        CHECK(mimo_cut_capacity(net, 1) == Approx(expect).epsilon(1e-12));
        CHECK(anc_upper_bound(net).layer_bounds[0] == Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("cooperative bound at the last hop dominates, equality when caps align") {
    RandomStream rng(83);
    for (int trial = 0; trial < 10; ++trial) {
        const LayeredNetwork net = testgen::random_two_hop(rng, 3);
        const double coop = mimo_cut_capacity(net, 2);
        const double layer = anc_upper_bound(net).layer_bounds[1];
        CHECK(coop >= layer - 1e-12);
    }
    // proportional construction: caps = c * h_last^2 makes sqrt caps align
    LayeredNetwork net;
    net.source_power = 1.0;
    Mat h0(2, 1), hl(1, 2);
    h0(0, 0) = 1.0;
    h0(1, 0) = 1.0;
    hl(0, 0) = 2.0;
    hl(0, 1) = 0.5;
    net.hops = {h0, hl};
    net.caps = {{4.0 * 0.7, 0.25 * 0.7}};  // P_k = 0.7 * h_k^2
    net.finalize();
    CHECK(mimo_cut_capacity(net, 2) ==
          Approx(anc_upper_bound(net).layer_bounds[1]).epsilon(1e-12));
}

TEST_CASE("diagonal hop with equal singular values water-fills uniformly") {
    LayeredNetwork net;
    net.source_power = 1.0;
    Mat h0(2, 1), mid(2, 2), hl(1, 2);
    h0(0, 0) = 1.0;
    h0(1, 0) = 1.0;
    mid(0, 0) = 1.5;
    mid(1, 1) = 1.5;
    hl(0, 0) = 1.0;
    hl(0, 1) = 1.0;
    net.hops = {h0, mid, hl};
    net.caps = {{1.0, 3.0}, {1.0, 1.0}};
    net.finalize();
    const double total = 4.0;
    const double expect = 2.0 * 0.5 * std::log2(1.0 + 1.5 * 1.5 * total / 2.0);
    CHECK(mimo_cut_capacity(net, 2) == Approx(expect).epsilon(1e-12));
}

TEST_CASE("single-hop network lower bound halves the received power") {
    LayeredNetwork net;
    net.source_power = 2.0;
    Mat h0(1, 1);
    h0(0, 0) = 1.5;
    net.hops = {h0};
    net.finalize();
    const LowerBoundReport rep = anc_lower_bound(net, 1);
    const double pr = 1.5 * 1.5 * 2.0;
    CHECK(rep.c3 == Approx(2.0).epsilon(1e-15));
    CHECK(rep.value == Approx(rate_from_snr(pr / 2.0)).epsilon(1e-15));
    CHECK(rep.upper == Approx(rate_from_snr(pr)).epsilon(1e-15));
    CHECK(rep.gap >= 0.0);
}

TEST_CASE("two-hop anchor at the relay layer reproduces the pseudo-optimal scheme") {
    RandomStream rng(89);
    for (int trial = 0; trial < 10; ++trial) {
        const LayeredNetwork net = testgen::random_two_hop(rng, 3);
        const LowerBoundReport rep = anc_lower_bound(net, 1);
        CHECK(rep.gains.approx_equal(scheme_pseudo_optimal(net), 1e-9));
    }
}

TEST_CASE("anchor at the destination reduces to max gains on uniform fixtures") {
    // every relay sees the same received power, so the shared margin equals
    // each relay's own margin
    LayeredNetwork net;
    net.source_power = 2.0;
    Mat h0(2, 1), hl(1, 2);
    h0(0, 0) = 1.0;
    h0(1, 0) = 1.0;
    hl(0, 0) = 3.0;
    hl(0, 1) = 0.5;
    net.hops = {h0, hl};
    net.caps = {{1.5, 1.5}};
    net.finalize();
    const LowerBoundReport rep = anc_lower_bound(net, 2);
    CHECK(rep.gains.approx_equal(scheme_max_gain(net), 1e-12));
}

TEST_CASE("mixed gains never exceed the caps") {
    RandomStream rng(97);
    for (int trial = 0; trial < 15; ++trial) {
        const LayeredNetwork net = testgen::random_layered(rng, {2, 3});
        const PowerProfile prof = power_profile(net);
        for (int l0 = 1; l0 <= 3; ++l0) {
            const LowerBoundReport rep = anc_lower_bound(net, l0);
            for (const auto& [id, beta] : rep.gains.beta)
                CHECK(beta <= prof.gain_cap.at(id) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("sandwich on random layered networks") {
    RandomStream rng(101);
    for (int trial = 0; trial < 40; ++trial) {
        const LayeredNetwork net = testgen::random_layered(rng, {2, 2});
        const UpperBoundReport up = anc_upper_bound(net);
        for (int l0 = 1; l0 <= net.layer_count(); ++l0) {
            const LowerBoundReport rep = anc_lower_bound(net, l0);
            const double emitted = rate_from_snr(destination_snr(net, rep.gains).snr);
            CHECK(rep.value <= emitted + 1e-12);
            CHECK(emitted <= up.value + 1e-12);
            CHECK(rep.gap >= -1e-12);
            // constant bookkeeping
            const double pr = up.layer_received_power[static_cast<size_t>(l0) - 1];
            CHECK(rep.c3 ==
                  Approx(1.0 + (rep.c2 + 1.0) / (rep.c1 * rep.c1 * pr)).epsilon(1e-12));
            CHECK(rep.c5 == Approx(rep.c3 * std::pow(1.0 + rep.delta_prime, l0 - 1))
                                .epsilon(1e-12));
            CHECK(rep.c4 >= rep.c2 - 1e-15);
        }
    }
}

TEST_CASE("delta0 is the worst reciprocal received power outside the anchor layer") {
    RandomStream rng(103);
    const LayeredNetwork net = testgen::random_layered(rng, {2, 3});
    const RelayDag dag = net.to_dag();
    const PowerProfile prof = power_profile(dag);
    for (int l0 = 1; l0 <= 3; ++l0) {
        const LowerBoundReport rep = anc_lower_bound(net, l0);
        double expect = 0.0;
        for (int l = 1; l < net.layer_count(); ++l) {
            if (l == l0) continue;
            for (const std::string& id : net.ids[static_cast<size_t>(l) - 1])
                expect = std::max(expect, prof.delta.at(id));
        }
        if (l0 != net.layer_count()) expect = std::max(expect, prof.delta.at(dag.dest));
        CHECK(rep.delta0 == Approx(expect).epsilon(1e-15));
    }
}

TEST_CASE("grid search never beats the closed-form bound") {
    RandomStream rng(107);
    for (int trial = 0; trial < 10; ++trial) {
        const LayeredNetwork net = testgen::random_two_hop(rng, 3);
        const GridSearchResult res = grid_search_best_gains(net.to_dag(), 9, 2);
        CHECK(res.rate <= anc_upper_bound(net).value + 1e-9);
    }
}

TEST_CASE("power-scaling family closes the gap") {
    auto family = [](double scale) {
        LayeredNetwork net;
        net.source_power = scale;
        Mat h0(2, 1), m1(2, 2), m2(2, 2), hl(1, 2);
        for (double& v : h0.a) v = 1.0;
        for (double& v : m1.a) v = 1.0;
        for (double& v : m2.a) v = 1.0;
        for (double& v : hl.a) v = 1.0;
        net.hops = {h0, m1, m2, hl};
        net.caps = {{1.0, 1.0}, {scale, scale}, {scale, scale}};
        net.finalize();
        return net;
    };
    const Vec grid{1.0, 10.0, 100.0, 1000.0, 10000.0};
    const auto rows = high_snr_gap_sweep(family, grid, 2);
    REQUIRE(rows.size() == 5);
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].r_low <= rows[i].emitted_rate + 1e-12);
        CHECK(rows[i].emitted_rate <= rows[i].r_up + 1e-12);
        if (i > 0) {
            CHECK(rows[i].delta <= rows[i - 1].delta + 1e-12);
            CHECK(rows[i].delta0 <= rows[i - 1].delta0 + 1e-12);
        }
    }
    CHECK(rows.back().delta < 0.1);
    CHECK_THROWS_AS(high_snr_gap_sweep(family, Vec{}, 2), std::invalid_argument);
}

TEST_CASE("cut bound reports an exhausted search budget") {
    RandomStream rng(109);
    const LayeredNetwork net = testgen::random_two_hop(rng, 3);
    const RelayDag dag = net.to_dag();
    CutSearchBudget tiny;
    tiny.eval_budget = 20;
    const CutBoundResult res = general_cut_upper_bound(dag, {{dag.dest}}, tiny);
    CHECK(res.budget_exhausted);
    CHECK(res.value > 0.0);  // best-so-far is still reported
}

TEST_CASE("joint gap evaluation stays nonnegative across many networks") {
    RandomStream rng(111);
    for (int trial = 0; trial < 500; ++trial) {
        const std::vector<int> shapes[] = {{2}, {3}, {2, 2}, {3, 2}};
        const LayeredNetwork net =
            testgen::random_layered(rng, shapes[rng.integer(4)]);
        const LowerBoundReport rep = best_lower_bound(net);
        CHECK(rep.gap >= -1e-12);
    }
}
