#include "anc/bounds.hpp"

#include <Eigen/Core>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "anc/detail/dag_eval.hpp"
#include "anc/oracle.hpp"

namespace anc {

namespace {

// Worst-case received powers grouped by layer; index 0 holds layer 1,
// the last entry the destination.
std::vector<Vec> layer_received_powers(const LayeredNetwork& net, const RelayDag& dag) {
    const PowerProfile prof = power_profile(dag);
    std::vector<Vec> out;
    for (int l = 1; l < net.layer_count(); ++l) {
        Vec row;
        for (const std::string& id : net.ids[static_cast<size_t>(l) - 1])
            row.push_back(prof.received_power.at(id));
        out.push_back(std::move(row));
    }
    out.push_back({prof.received_power.at(net.dest_id)});
    return out;
}

double sum(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

bool cut_is_admissible(const RelayDag& net, const std::set<std::string>& J) {
    if (J.empty() || J.count(net.source)) return false;
    for (const std::string& id : J)
        if (id != net.dest && !net.is_relay(id)) return false;
    if (J.count(net.dest)) return true;
    // Source must not reach the destination once J's nodes are removed.
    std::vector<char> blocked(net.nodes.size(), 0);
    for (const std::string& id : J) blocked[static_cast<size_t>(net.index.at(id))] = 1;
    std::vector<char> seen(net.nodes.size(), 0);
    std::deque<int> q{net.index.at(net.source)};
    seen[static_cast<size_t>(net.index.at(net.source))] = 1;
    while (!q.empty()) {
        const int u = q.front();
        q.pop_front();
        if (u == net.index.at(net.dest)) return false;
        for (const auto& [v, g] : net.out_edges[static_cast<size_t>(u)]) {
            if (blocked[static_cast<size_t>(v)] || seen[static_cast<size_t>(v)]) continue;
            seen[static_cast<size_t>(v)] = 1;
            q.push_back(v);
        }
    }
    return true;
}

}  // namespace

UpperBoundReport anc_upper_bound(const LayeredNetwork& net) {
    const std::vector<Vec> pr = layer_received_powers(net, net.to_dag());
    UpperBoundReport rep;
    for (const Vec& layer : pr) {
        const double total = sum(layer);
        rep.layer_received_power.push_back(total);
        rep.layer_bounds.push_back(rate_from_snr(total));
    }
    rep.argmin_layer = 1;
    for (int l0 = 2; l0 <= static_cast<int>(rep.layer_bounds.size()); ++l0)
        if (rep.layer_bounds[static_cast<size_t>(l0) - 1] <
            rep.layer_bounds[static_cast<size_t>(rep.argmin_layer) - 1])
            rep.argmin_layer = l0;
    rep.value = rep.layer_bounds[static_cast<size_t>(rep.argmin_layer) - 1];
    return rep;
}

CutBoundResult general_cut_upper_bound(const RelayDag& net,
                                       const std::vector<std::set<std::string>>& cuts,
                                       const CutSearchBudget& budget) {
    if (cuts.empty()) throw std::invalid_argument("no cut node sets supplied");
    const detail::DagEvaluator ev(net);
    const PowerProfile prof = power_profile(net);
    Vec caps(static_cast<size_t>(ev.relay_count()));
    for (int s = 0; s < ev.relay_count(); ++s)
        caps[static_cast<size_t>(s)] = prof.gain_cap.at(ev.relay_ids()[static_cast<size_t>(s)]);

    CutBoundResult res;
    res.value = std::numeric_limits<double>::infinity();
    res.note = "numeric, not closed-form";
    for (const std::set<std::string>& J : cuts) {
        if (!cut_is_admissible(net, J))
            throw std::invalid_argument("inadmissible cut node set");
        std::vector<int> slots;
        bool with_dest = false;
        for (const std::string& id : J) {
            if (id == net.dest) {
                with_dest = true;
                continue;
            }
            const auto& ids = ev.relay_ids();
            slots.push_back(static_cast<int>(std::find(ids.begin(), ids.end(), id) - ids.begin()));
        }
        auto objective = [&](const Vec& beta) {
            const auto sp = ev.split(beta);
            double noise = with_dest ? 1.0 : 0.0;
            for (const int s : slots) noise += sp.relay_noise[static_cast<size_t>(s)];
            if (noise == 0.0) return 0.0;  // admissible cuts force signal == 0 here too
            return sp.signal / noise;
        };
        const AscentResult best = coordinate_ascent_max(objective, caps, budget.starts,
                                                        budget.step_tol, budget.eval_budget,
                                                        budget.seed);
        res.budget_exhausted = res.budget_exhausted || best.budget_exhausted;
        res.value = std::min(res.value, rate_from_snr(best.value));
    }
    return res;
}

double mimo_cut_capacity(const LayeredNetwork& net, int l0) {
    const int L = net.layer_count();
    if (l0 < 1 || l0 > L) throw std::invalid_argument("layer index out of range");
    const Mat& hop = net.hops[static_cast<size_t>(l0) - 1];
    Eigen::MatrixXd h(hop.rows, hop.cols);
    for (int r = 0; r < hop.rows; ++r)
        for (int c = 0; c < hop.cols; ++c) h(r, c) = hop(r, c);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(h);
    const Eigen::VectorXd sv = svd.singularValues();

    const double total_power =
        l0 == 1 ? net.source_power : sum(net.caps[static_cast<size_t>(l0) - 2]);

    std::vector<double> gain2;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-300) gain2.push_back(sv(i) * sv(i));
    if (gain2.empty() || total_power <= 0) return 0.0;

    // Water level: powers p_i = max(0, level - 1/gain2_i) must spend the
    // whole budget.
    auto spent = [&](double level) {
        double s = 0.0;
        for (const double g : gain2) s += std::max(0.0, level - 1.0 / g);
        return s;
    };
    double lo = 0.0, hi = 1.0 / *std::max_element(gain2.begin(), gain2.end()) + total_power;
    while (spent(hi) < total_power) hi *= 2.0;
    const double tol = 1e-12 * std::max(1.0, total_power);
    for (int it = 0; it < 200 && (spent(hi) - spent(lo)) > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (spent(mid) < total_power) lo = mid; else hi = mid;
    }
    const double level = 0.5 * (lo + hi);
    double cap = 0.0;
    for (const double g : gain2) cap += 0.5 * std::log2(1.0 + g * std::max(0.0, level - 1.0 / g));
    return cap;
}

LowerBoundReport anc_lower_bound(const LayeredNetwork& net, int l0) {
    const int L = net.layer_count();
    if (l0 < 1 || l0 > L) throw std::invalid_argument("layer index out of range");
    const RelayDag dag = net.to_dag();
    const PowerProfile prof = power_profile(dag);
    const std::vector<Vec> pr = layer_received_powers(net, dag);

    LowerBoundReport rep;
    rep.l0 = l0;

    // Largest reciprocal received power over every layer except l0 (the
    // destination counts as the final layer).
    rep.delta0 = 0.0;
    for (int l = 1; l <= L; ++l) {
        if (l == l0) continue;
        for (const double p : pr[static_cast<size_t>(l) - 1])
            rep.delta0 = std::max(rep.delta0, 1.0 / p);
    }
    rep.delta_prime = 0.0;
    for (int l = 1; l <= L; ++l) {
        if (l == l0 || l == l0 + 1) continue;
        for (const double p : pr[static_cast<size_t>(l) - 1])
            rep.delta_prime = std::max(rep.delta_prime, 1.0 / p);
    }

    // Gains: uniform margin below l0 so the per-layer signal attenuation
    // telescopes; caps above l0; the matched direction at l0 itself.
    std::vector<Vec> gains(static_cast<size_t>(std::max(0, L - 1)));
    for (int l = 1; l < L; ++l) {
        if (l == l0) continue;
        Vec row;
        for (int i = 0; i < net.layer_size(l); ++i) {
            const std::string& id = net.ids[static_cast<size_t>(l) - 1][static_cast<size_t>(i)];
            const double cap = net.caps[static_cast<size_t>(l) - 1][static_cast<size_t>(i)];
            const double rcv = prof.received_power.at(id);
            if (l < l0) {
                row.push_back(std::sqrt(cap / ((1.0 + rep.delta0) * rcv)));
            } else {
                row.push_back(prof.gain_cap.at(id));
            }
        }
        gains[static_cast<size_t>(l) - 1] = std::move(row);
    }

    const Vec& pr_l0 = pr[static_cast<size_t>(l0) - 1];
    const double pr_total = sum(pr_l0);

    if (l0 < L) {
        // Downstream gain of each layer-l0 node's output; depends only on
        // the already-fixed gains above l0.
        GainAssignment partial;
        for (int l = 1; l < L; ++l) {
            if (l == l0) {
                for (const std::string& id : net.ids[static_cast<size_t>(l) - 1])
                    partial.beta[id] = 0.0;
                continue;
            }
            for (int i = 0; i < net.layer_size(l); ++i)
                partial.beta[net.ids[static_cast<size_t>(l) - 1][static_cast<size_t>(i)]] =
                    gains[static_cast<size_t>(l) - 1][static_cast<size_t>(i)];
        }
        Vec g(static_cast<size_t>(net.layer_size(l0)));
        rep.c1 = std::numeric_limits<double>::infinity();
        for (int i = 0; i < net.layer_size(l0); ++i) {
            const std::string& id = net.ids[static_cast<size_t>(l0) - 1][static_cast<size_t>(i)];
            GainAssignment probe = partial;
            probe.beta[id] = 1.0;
            // with unit gain at node i and zeros elsewhere in the layer,
            // the destination transfer equals the downstream gain g_i
            double gi = 0.0;
            {
                SnrBreakdown b = destination_snr(net, probe);
                gi = std::sqrt(b.per_source_noise.at(id));
            }
            if (gi == 0.0)
                throw std::domain_error("degenerate downstream channel: node " + id +
                                        " has zero gain to the destination");
            g[static_cast<size_t>(i)] = gi;
            rep.c1 = std::min(rep.c1, prof.gain_cap.at(id) * gi /
                                          std::sqrt(pr_l0[static_cast<size_t>(i)]));
        }
        Vec row(static_cast<size_t>(net.layer_size(l0)));
        for (int i = 0; i < net.layer_size(l0); ++i)
            row[static_cast<size_t>(i)] = rep.c1 *
                                          std::sqrt(pr_l0[static_cast<size_t>(i)]) /
                                          g[static_cast<size_t>(i)];
        gains[static_cast<size_t>(l0) - 1] = std::move(row);
    } else {
        // The destination has no amplification gain; normalizing its unit
        // noise as the layer-L term fixes the scale below.
        rep.c1 = 1.0 / std::sqrt(pr_total);
    }

    rep.gains = assignment_from_layers(net, gains);

    const SnrBreakdown emitted = destination_snr(net, rep.gains);
    rep.c2 = 0.0;
    for (int l = l0 + 1; l < L; ++l) rep.c2 += emitted.per_layer_noise[static_cast<size_t>(l) - 1];
    rep.c4 = rep.c2;
    for (int l = 1; l < l0; ++l) rep.c4 += emitted.per_layer_noise[static_cast<size_t>(l) - 1];

    const double c1sq_pr = rep.c1 * rep.c1 * pr_total;
    rep.c3 = 1.0 + (rep.c2 + 1.0) / c1sq_pr;
    const double atten = std::pow(1.0 + rep.delta0, l0 - 1);
    rep.c5 = rep.c3 * std::pow(1.0 + rep.delta_prime, l0 - 1);

    const double snr_low = (pr_total / atten) / ((1.0 - 1.0 / atten) * pr_total + rep.c3);
    rep.value = rate_from_snr(snr_low);
    rep.upper = anc_upper_bound(net).value;
    rep.gap = rep.upper - rep.value;

    // The emitted scheme must achieve at least the bound it certifies.
    const double emitted_rate = rate_from_snr(emitted.snr);
    if (emitted_rate + 1e-9 < rep.value)
        throw std::logic_error("lower bound exceeds the rate of its own scheme");
    return rep;
}

LowerBoundReport best_lower_bound(const LayeredNetwork& net) {
    LowerBoundReport best;
    bool have = false;
    for (int l0 = 1; l0 <= net.layer_count(); ++l0) {
        LowerBoundReport rep;
        try {
            rep = anc_lower_bound(net, l0);
        } catch (const std::domain_error&) {
            continue;  // degenerate downstream channel at this anchor layer
        }
        if (!have || rep.value > best.value) {
            best = rep;
            have = true;
        }
    }
    if (!have) throw std::domain_error("no usable anchor layer");
    return best;
}

std::vector<GapSweepRow> high_snr_gap_sweep(
    const std::function<LayeredNetwork(double)>& family, std::span<const double> grid, int l0) {
    if (grid.empty()) throw std::invalid_argument("empty sweep grid");
    std::vector<GapSweepRow> rows;
    for (const double p : grid) {
        const LayeredNetwork net = family(p);
        const LowerBoundReport low = anc_lower_bound(net, l0);
        GapSweepRow row;
        row.param = p;
        row.r_up = low.upper;
        row.r_low = low.value;
        row.delta = low.gap;
        row.delta0 = low.delta0;
        row.delta_prime = low.delta_prime;
        row.emitted_rate = rate_from_snr(destination_snr(net, low.gains).snr);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace anc
