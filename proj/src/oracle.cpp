#include "anc/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "anc/detail/dag_eval.hpp"
#include "anc/mac_region.hpp"
#include "anc/snr.hpp"

namespace anc {

namespace detail {

DagEvaluator::DagEvaluator(const RelayDag& net) {
    for (const auto& [id, cap] : net.relay_caps) {
        relay_ids_.push_back(id);
        relay_caps_.push_back(cap);
    }
    order_ = net.topo;
    in_ = net.in_edges;
    out_ = net.out_edges;
    slot_.assign(net.nodes.size(), -1);
    for (size_t s = 0; s < relay_ids_.size(); ++s)
        slot_[static_cast<size_t>(net.index.at(relay_ids_[s]))] = static_cast<int>(s);
    source_ = net.index.at(net.source);
    dest_ = net.index.at(net.dest);
    source_power_ = net.source_power;
}

DagEvaluator::Split DagEvaluator::split(const Vec& beta) const {
    // Downstream closure r[j]: gain from node j's output to the destination.
    std::vector<double> r(slot_.size(), 0.0);
    r[static_cast<size_t>(dest_)] = 1.0;
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
        const int j = *it;
        if (j == dest_) continue;
        double acc = 0.0;
        for (const auto& [k, h] : out_[static_cast<size_t>(j)]) {
            const int s = slot_[static_cast<size_t>(k)];
            acc += h * (k == dest_ ? 1.0 : beta[static_cast<size_t>(s)]) *
                   r[static_cast<size_t>(k)];
        }
        r[static_cast<size_t>(j)] = acc;
    }
    Split out;
    const double f_sd = r[static_cast<size_t>(source_)];
    out.signal = f_sd * f_sd * source_power_;
    out.relay_noise.resize(relay_ids_.size());
    for (size_t n = 0; n < slot_.size(); ++n) {
        const int s = slot_[n];
        if (s < 0) continue;
        const double f = beta[static_cast<size_t>(s)] * r[n];
        out.relay_noise[static_cast<size_t>(s)] = f * f;
    }
    return out;
}

double DagEvaluator::snr(const Vec& beta) const {
    const Split sp = split(beta);
    double noise = 1.0;
    for (const double v : sp.relay_noise) noise += v;
    return sp.signal / noise;
}

}  // namespace detail

void parallel_blocks(std::int64_t count, std::int64_t block_size,
                     const std::function<void(std::int64_t, std::int64_t, int)>& fn) {
    if (count <= 0) return;
    const int nblocks = static_cast<int>((count + block_size - 1) / block_size);
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const int workers = static_cast<int>(std::min<unsigned>(std::min(hw, 8u),
                                                            static_cast<unsigned>(nblocks)));
    std::atomic<int> next{0};
    auto run = [&]() {
        for (;;) {
            const int b = next.fetch_add(1);
            if (b >= nblocks) return;
            const std::int64_t begin = static_cast<std::int64_t>(b) * block_size;
            const std::int64_t end = std::min(count, begin + block_size);
            fn(begin, end, b);
        }
    };
    if (workers <= 1) {
        run();
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
}

namespace {

constexpr std::int64_t kBlock = 1 << 14;

struct Accum {
    double sig2 = 0.0;
    double noi2 = 0.0;
    std::vector<double> p2;  // per transmitting node: sum x^2
    std::vector<double> p4;  // per transmitting node: sum x^4
};

}  // namespace

SimResult monte_carlo_sim(const RelayDag& net, const GainAssignment& gains,
                          const SimConfig& cfg) {
    if (cfg.samples < 1) throw std::invalid_argument("sample count must be positive");
    const detail::DagEvaluator ev(net);
    const int nn = ev.node_count();
    Vec beta(static_cast<size_t>(ev.relay_count()));
    for (int s = 0; s < ev.relay_count(); ++s)
        beta[static_cast<size_t>(s)] = gains.at(ev.relay_ids()[static_cast<size_t>(s)]);

    // Normal draw m of sample i comes from Philox block (i, m/2); m == 0 is
    // the source symbol, m == 1 + rank(node) the node noises.
    std::vector<int> draw_index(static_cast<size_t>(nn), -1);
    {
        int next = 1;
        for (int v = 0; v < nn; ++v)
            if (v != ev.source_node()) draw_index[static_cast<size_t>(v)] = next++;
    }

    const Philox phil(cfg.seed);
    const int nblocks = static_cast<int>((cfg.samples + kBlock - 1) / kBlock);
    std::vector<Accum> acc(static_cast<size_t>(nblocks));

    // transmitting nodes: source + relays; powers indexed by relay slot,
    // with the source in the last slot.
    const int npow = ev.relay_count() + 1;
    const double sqrt_ps = std::sqrt(ev.source_power());

    parallel_blocks(cfg.samples, kBlock, [&](std::int64_t begin, std::int64_t end, int b) {
        Accum& a = acc[static_cast<size_t>(b)];
        a.p2.assign(static_cast<size_t>(npow), 0.0);
        a.p4.assign(static_cast<size_t>(npow), 0.0);
        std::vector<double> xs(static_cast<size_t>(nn));  // transmit, signal part
        std::vector<double> xn(static_cast<size_t>(nn));  // transmit, noise part
        std::vector<double> z(static_cast<size_t>(nn) + 1);
        for (std::int64_t i = begin; i < end; ++i) {
            const int ndraw = nn;  // draw 0: source symbol, 1..nn-1: node noises
            for (int m = 0; m < ndraw; m += 2) {
                const auto pair = phil.normals(static_cast<std::uint64_t>(i),
                                               static_cast<std::uint64_t>(m / 2));
                z[static_cast<size_t>(m)] = pair[0];
                if (m + 1 < static_cast<int>(z.size())) z[static_cast<size_t>(m) + 1] = pair[1];
            }
            double ysig = 0.0, ynoi = 0.0;
            for (const int k : ev.order()) {
                if (k == ev.source_node()) {
                    xs[static_cast<size_t>(k)] = sqrt_ps * z[0];
                    xn[static_cast<size_t>(k)] = 0.0;
                    continue;
                }
                double s = 0.0, n = 0.0;
                for (const auto& [j, h] : ev.in()[static_cast<size_t>(k)]) {
                    s += h * xs[static_cast<size_t>(j)];
                    n += h * xn[static_cast<size_t>(j)];
                }
                n += z[static_cast<size_t>(draw_index[static_cast<size_t>(k)])];
                if (k == ev.dest_node()) {
                    ysig = s;
                    ynoi = n;
                } else {
                    const double bk = beta[static_cast<size_t>(ev.slot()[static_cast<size_t>(k)])];
                    xs[static_cast<size_t>(k)] = bk * s;
                    xn[static_cast<size_t>(k)] = bk * n;
                    const double x = xs[static_cast<size_t>(k)] + xn[static_cast<size_t>(k)];
                    const int slot = ev.slot()[static_cast<size_t>(k)];
                    a.p2[static_cast<size_t>(slot)] += x * x;
                    a.p4[static_cast<size_t>(slot)] += x * x * x * x;
                }
            }
            const double xsrc = xs[static_cast<size_t>(ev.source_node())];
            a.p2[static_cast<size_t>(npow) - 1] += xsrc * xsrc;
            a.p4[static_cast<size_t>(npow) - 1] += xsrc * xsrc * xsrc * xsrc;
            a.sig2 += ysig * ysig;
            a.noi2 += ynoi * ynoi;
        }
    });

    Accum total;
    total.p2.assign(static_cast<size_t>(npow), 0.0);
    total.p4.assign(static_cast<size_t>(npow), 0.0);
    for (const Accum& a : acc) {  // fixed block order: bit-for-bit reproducible
        total.sig2 += a.sig2;
        total.noi2 += a.noi2;
        for (int p = 0; p < npow; ++p) {
            total.p2[static_cast<size_t>(p)] += a.p2[static_cast<size_t>(p)];
            total.p4[static_cast<size_t>(p)] += a.p4[static_cast<size_t>(p)];
        }
    }

    SimResult res;
    const double inv = 1.0 / static_cast<double>(cfg.samples);
    res.signal_power = total.sig2 * inv;
    res.noise_power = total.noi2 * inv;
    res.snr = res.noise_power > 0 ? res.signal_power / res.noise_power : 0.0;
    auto store = [&](const std::string& id, int p) {
        const double m2 = total.p2[static_cast<size_t>(p)] * inv;
        const double m4 = total.p4[static_cast<size_t>(p)] * inv;
        res.node_power[id] = m2;
        const double var = std::max(0.0, m4 - m2 * m2);
        res.node_power_se[id] = std::sqrt(var * inv);
    };
    for (int s = 0; s < ev.relay_count(); ++s) store(ev.relay_ids()[static_cast<size_t>(s)], s);
    store(net.source, npow - 1);
    return res;
}

MacSimResult monte_carlo_mac(const TwoHopMac& mac, const Vec& beta, const SimConfig& cfg) {
    if (static_cast<int>(beta.size()) != mac.n)
        throw std::invalid_argument("gain vector length mismatch");
    const Philox phil(cfg.seed);
    const int nblocks = static_cast<int>((cfg.samples + kBlock - 1) / kBlock);
    struct A {
        double s1 = 0, s2 = 0, nz = 0;
        std::vector<double> p2, p4;
    };
    std::vector<A> acc(static_cast<size_t>(nblocks));
    const double q1 = std::sqrt(mac.ps1), q2 = std::sqrt(mac.ps2);

    parallel_blocks(cfg.samples, kBlock, [&](std::int64_t begin, std::int64_t end, int b) {
        A& a = acc[static_cast<size_t>(b)];
        a.p2.assign(static_cast<size_t>(mac.n), 0.0);
        a.p4.assign(static_cast<size_t>(mac.n), 0.0);
        std::vector<double> z(static_cast<size_t>(mac.n) + 4);
        for (std::int64_t i = begin; i < end; ++i) {
            const int ndraw = mac.n + 3;  // x1, x2, relay noises, dest noise
            for (int m = 0; m < ndraw; m += 2) {
                const auto pair = phil.normals(static_cast<std::uint64_t>(i),
                                               static_cast<std::uint64_t>(m / 2));
                z[static_cast<size_t>(m)] = pair[0];
                z[static_cast<size_t>(m) + 1] = pair[1];
            }
            const double x1 = q1 * z[0];
            const double x2 = q2 * z[1];
            double d1 = 0, d2 = 0, dn = z[static_cast<size_t>(mac.n) + 2];
            for (int k = 0; k < mac.n; ++k) {
                const auto ks = static_cast<size_t>(k);
                const double bk = beta[ks];
                const double y1 = mac.h01[ks] * x1;
                const double y2 = mac.h02[ks] * x2;
                const double yz = z[ks + 2];
                const double x = bk * (y1 + y2 + yz);
                a.p2[ks] += x * x;
                a.p4[ks] += x * x * x * x;
                d1 += mac.h1[ks] * bk * y1;
                d2 += mac.h1[ks] * bk * y2;
                dn += mac.h1[ks] * bk * yz;
            }
            a.s1 += d1 * d1;
            a.s2 += d2 * d2;
            a.nz += dn * dn;
        }
    });

    A total;
    total.p2.assign(static_cast<size_t>(mac.n), 0.0);
    total.p4.assign(static_cast<size_t>(mac.n), 0.0);
    for (const A& a : acc) {
        total.s1 += a.s1;
        total.s2 += a.s2;
        total.nz += a.nz;
        for (int k = 0; k < mac.n; ++k) {
            total.p2[static_cast<size_t>(k)] += a.p2[static_cast<size_t>(k)];
            total.p4[static_cast<size_t>(k)] += a.p4[static_cast<size_t>(k)];
        }
    }
    const double inv = 1.0 / static_cast<double>(cfg.samples);
    MacSimResult res;
    const double s1 = total.s1 * inv, s2 = total.s2 * inv, nz = total.nz * inv;
    res.cap1 = 0.5 * std::log2(1.0 + s1 / nz);
    res.cap2 = 0.5 * std::log2(1.0 + s2 / nz);
    res.cap_sum = 0.5 * std::log2(1.0 + (s1 + s2) / nz);
    for (int k = 0; k < mac.n; ++k) {
        const double m2 = total.p2[static_cast<size_t>(k)] * inv;
        const double m4 = total.p4[static_cast<size_t>(k)] * inv;
        res.relay_power.push_back(m2);
        res.relay_power_se.push_back(std::sqrt(std::max(0.0, m4 - m2 * m2) * inv));
    }
    return res;
}

std::vector<std::string> relay_order(const RelayDag& net) {
    std::vector<std::string> ids;
    for (const auto& [id, _] : net.relay_caps) ids.push_back(id);
    return ids;  // std::map iteration is already lexicographic
}

GridSearchResult grid_search_best_gains(const RelayDag& net, int grid_points_per_dim,
                                        int refine_rounds,
                                        const std::function<double(const Vec&)>& objective) {
    const detail::DagEvaluator ev(net);
    const int n = ev.relay_count();
    if (n > 6) throw std::invalid_argument("grid search supports at most 6 relays");
    if (grid_points_per_dim < 2) throw std::invalid_argument("need at least 2 grid points");
    const PowerProfile prof = power_profile(net);
    Vec cap(static_cast<size_t>(n));
    for (int s = 0; s < n; ++s)
        cap[static_cast<size_t>(s)] = prof.gain_cap.at(ev.relay_ids()[static_cast<size_t>(s)]);

    auto value = [&](const Vec& b) { return objective ? objective(b) : ev.snr(b); };

    Vec lo(static_cast<size_t>(n), 0.0), hi = cap;
    Vec best = cap;
    double best_val = value(best);
    const int g = grid_points_per_dim;
    for (int round = 0; round <= refine_rounds; ++round) {
        std::vector<int> idx(static_cast<size_t>(n), 0);
        Vec pt(static_cast<size_t>(n));
        for (;;) {
            for (int d = 0; d < n; ++d) {
                const auto ds = static_cast<size_t>(d);
                pt[ds] = lo[ds] + (hi[ds] - lo[ds]) * idx[ds] / (g - 1);
            }
            const double v = value(pt);
            if (v > best_val) {
                best_val = v;
                best = pt;
            }
            int d = 0;
            while (d < n && ++idx[static_cast<size_t>(d)] == g) {
                idx[static_cast<size_t>(d)] = 0;
                ++d;
            }
            if (d == n) break;
        }
        // shrink the box around the incumbent
        for (int d = 0; d < n; ++d) {
            const auto ds = static_cast<size_t>(d);
            const double w = (hi[ds] - lo[ds]) * 0.25;
            lo[ds] = std::max(0.0, best[ds] - 0.5 * w);
            hi[ds] = std::min(cap[ds], best[ds] + 0.5 * w);
        }
    }

    GridSearchResult res;
    for (int s = 0; s < n; ++s)
        res.gains.beta[ev.relay_ids()[static_cast<size_t>(s)]] = best[static_cast<size_t>(s)];
    res.rate = rate_from_snr(best_val);
    return res;
}

AscentResult coordinate_ascent_max(const std::function<double(const Vec&)>& objective,
                                   const Vec& upper, int starts, double step_tol,
                                   std::int64_t eval_budget, std::uint64_t seed) {
    const int n = static_cast<int>(upper.size());
    std::int64_t evals = 0;
    bool exhausted = false;
    auto value = [&](const Vec& b) {
        ++evals;
        return objective(b);
    };

    AscentResult out;
    out.best = upper;
    out.value = value(out.best);

    RandomStream rng(seed);
    for (int s = 0; s < starts; ++s) {
        Vec x(upper.size());
        if (s == 0) {
            x = upper;
        } else if (s == 1) {
            for (size_t i = 0; i < x.size(); ++i) x[i] = 0.5 * upper[i];
        } else {
            for (size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform() * upper[i];
        }
        double val = value(x);
        for (int sweep = 0; sweep < 200; ++sweep) {
            double moved = 0.0;
            for (int d = 0; d < n; ++d) {
                const auto ds = static_cast<size_t>(d);
                // coarse scan then shrink around the best sample
                double blo = 0.0, bhi = upper[ds];
                double cbest = x[ds], cval = val;
                for (int refine = 0; refine < 8; ++refine) {
                    const int pts = refine == 0 ? 33 : 9;
                    for (int i = 0; i < pts; ++i) {
                        const double cand = blo + (bhi - blo) * i / (pts - 1);
                        Vec t = x;
                        t[ds] = cand;
                        const double v = value(t);
                        if (v > cval) {
                            cval = v;
                            cbest = cand;
                        }
                        if (evals >= eval_budget) break;
                    }
                    const double w = (bhi - blo) * 0.25;
                    blo = std::max(0.0, cbest - 0.5 * w);
                    bhi = std::min(upper[ds], cbest + 0.5 * w);
                    if (evals >= eval_budget) break;
                }
                moved = std::max(moved, std::fabs(cbest - x[ds]));
                x[ds] = cbest;
                val = cval;
                if (evals >= eval_budget) break;
            }
            if (moved < step_tol || evals >= eval_budget) break;
        }
        if (val > out.value) {
            out.value = val;
            out.best = x;
        }
        if (evals >= eval_budget) {
            exhausted = true;
            break;
        }
    }
    out.budget_exhausted = exhausted;
    return out;
}

bool hull_contains(const RegionPolyline& region, std::array<double, 2> point, double tol) {
    const auto& pts = region.pts;
    if (pts.empty()) return false;
    const double x = point[0], y = point[1];
    if (x < -tol || y < -tol) return false;
    if (x > pts.back()[0] + tol) return false;
    if (x <= pts.front()[0]) return y <= pts.front()[1] + tol;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        const double x0 = pts[i][0], x1 = pts[i + 1][0];
        if (x > x1) continue;
        if (x1 - x0 <= 1e-300) return y <= std::max(pts[i][1], pts[i + 1][1]) + tol;
        const double t = (x - x0) / (x1 - x0);
        const double yb = pts[i][1] + t * (pts[i + 1][1] - pts[i][1]);
        return y <= yb + tol;
    }
    return y <= pts.back()[1] + tol;
}

}  // namespace anc
