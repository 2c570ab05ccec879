// ancrate: rate analysis for amplify-and-forward relay networks.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "anc/bounds.hpp"
#include "anc/mac_region.hpp"
#include "anc/network.hpp"
#include "anc/oracle.hpp"
#include "anc/schemes.hpp"
#include "anc/snr.hpp"

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Output {
    std::unique_ptr<std::ofstream> file;
    std::ostream& stream() { return file ? *file : std::cout; }

    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file) throw std::runtime_error("cannot write " + path);
        }
    }
};

struct Options {
    std::string out;
    std::uint64_t seed = 1;
    std::string format = "text";
    bool csv() const { return format == "csv"; }
};

anc::Network load(const std::string& path) {
    const std::string text = slurp(path);
    std::fprintf(stderr, "ancrate %s input=%s fnv64=%016" PRIx64 "\n", ANCRATE_VERSION,
                 path.c_str(), fnv1a64(text));
    return anc::parse_network(text);
}

anc::LayeredNetwork as_layered_net(const anc::Network& net) {
    if (const auto* d = std::get_if<anc::RelayDag>(&net)) return anc::as_layered(*d);
    if (const auto* l = std::get_if<anc::LayeredNetwork>(&net)) return *l;
    throw std::invalid_argument("this command needs a unicast (dag or layered) network");
}

anc::GainAssignment gains_for(const anc::LayeredNetwork& net, const std::string& spec) {
    if (spec == "max") {
        if (net.layer_count() == 2) return anc::scheme_max_gain(net);
        const anc::PowerProfile prof = anc::power_profile(net);
        anc::GainAssignment g;
        for (const auto& [id, cap] : prof.gain_cap) g.beta[id] = cap;
        return g;
    }
    if (spec == "pseudo") return anc::scheme_pseudo_optimal(net);
    if (spec == "select") return anc::scheme_selection(net);
    if (spec.rfind("mixed:", 0) == 0)
        return anc::mixed_multihop_scheme(net, std::stoi(spec.substr(6)));
    if (spec.rfind("file:", 0) == 0) {
        anc::GainAssignment g;
        std::istringstream in(slurp(spec.substr(5)));
        std::string id;
        double beta;
        while (in >> id >> beta) g.beta[id] = beta;
        return g;
    }
    throw std::invalid_argument("unknown scheme '" + spec + "'");
}

int cmd_bounds(const Options& opt, const std::string& net_path, const std::string& cuts_path) {
    const anc::Network net = load(net_path);
    Output out(opt.out);
    const anc::LayeredNetwork layered = as_layered_net(net);
    const anc::UpperBoundReport rep = anc::anc_upper_bound(layered);
    if (opt.csv()) {
        out.stream() << "layer,P_R_total,R_up\n";
        for (size_t l = 0; l < rep.layer_bounds.size(); ++l)
            out.stream() << (l + 1) << "," << num(rep.layer_received_power[l]) << ","
                         << num(rep.layer_bounds[l]) << "\n";
    } else {
        out.stream() << "per-layer rate bounds (bits/use)\n";
        for (size_t l = 0; l < rep.layer_bounds.size(); ++l)
            out.stream() << "  layer " << (l + 1) << ": received power " <<
                num(rep.layer_received_power[l]) << "  bound " << num(rep.layer_bounds[l])
                         << (static_cast<int>(l + 1) == rep.argmin_layer ? "  <- min" : "")
                         << "\n";
        out.stream() << "upper bound: " << num(rep.value) << " bits (layer "
                     << rep.argmin_layer << ")\n";
    }
    if (!cuts_path.empty()) {
        const anc::RelayDag dag = std::holds_alternative<anc::RelayDag>(net)
                                      ? std::get<anc::RelayDag>(net)
                                      : layered.to_dag();
        std::vector<std::set<std::string>> cuts;
        std::istringstream in(slurp(cuts_path));
        std::string line;
        while (std::getline(in, line)) {
            std::istringstream ls(line);
            std::set<std::string> J;
            std::string id;
            while (ls >> id) J.insert(id);
            if (!J.empty()) cuts.push_back(std::move(J));
        }
        anc::CutSearchBudget budget;
        budget.seed = opt.seed;
        const anc::CutBoundResult cb = anc::general_cut_upper_bound(dag, cuts, budget);
        out.stream() << (opt.csv() ? "cut_bound," : "cut bound: ") << num(cb.value)
                     << (opt.csv() ? "," : " bits (") << cb.note
                     << (cb.budget_exhausted ? "; budget exhausted" : "")
                     << (opt.csv() ? "\n" : ")\n");
    }
    return 0;
}

int cmd_rate(const Options& opt, const std::string& net_path, const std::string& scheme) {
    const anc::Network net = load(net_path);
    Output out(opt.out);
    const anc::LayeredNetwork layered = as_layered_net(net);
    const anc::GainAssignment g = gains_for(layered, scheme);
    const anc::SnrBreakdown b = anc::destination_snr(layered, g);
    const double rate = anc::rate_from_snr(b.snr);
    if (opt.csv()) {
        out.stream() << "node,beta\n";
        for (const auto& [id, beta] : g.beta) out.stream() << id << "," << num(beta) << "\n";
        out.stream() << "signal_power,relay_noise,dest_noise,snr,rate_bits\n"
                     << num(b.signal_power) << "," << num(b.relay_noise()) << ","
                     << num(b.dest_noise) << "," << num(b.snr) << "," << num(rate) << "\n";
    } else {
        out.stream() << "scheme " << scheme << "\n";
        for (const auto& [id, beta] : g.beta)
            out.stream() << "  beta[" << id << "] = " << num(beta) << "\n";
        out.stream() << "signal power " << num(b.signal_power) << "\n";
        out.stream() << "relay noise  " << num(b.relay_noise()) << "  (+1 at destination)\n";
        for (size_t l = 0; l < b.per_layer_noise.size(); ++l)
            out.stream() << "  layer " << (l + 1) << " noise " << num(b.per_layer_noise[l])
                         << "\n";
        out.stream() << "snr  " << num(b.snr) << "\n";
        out.stream() << "rate " << num(rate) << " bits/use\n";
    }
    return 0;
}

int cmd_certify(const Options& opt, const std::string& net_path) {
    const anc::Network net = load(net_path);
    Output out(opt.out);
    const anc::LayeredNetwork layered = as_layered_net(net);
    const anc::DominanceClass dom = anc::classify_dominance(layered);
    const anc::GapCertificate cert = anc::gap_certificate(layered);
    if (opt.csv()) {
        out.stream() << "class,w_max_gain,w_pseudo,scheme,rate_bits,bound_bits,gap_bound_bits,"
                        "epsilon\n";
        out.stream() << anc::to_string(dom.kind) << "," << num(dom.upper_noise_max_gain) << ","
                     << num(dom.upper_noise_pseudo) << "," << cert.scheme << ","
                     << num(cert.rate) << "," << num(cert.bound) << "," << num(cert.gap_bound)
                     << "," << num(cert.epsilon) << "\n";
    } else {
        out.stream() << "noise class: " << anc::to_string(dom.kind) << "\n";
        out.stream() << "  relay-propagated noise, max-gain scheme:       "
                     << num(dom.upper_noise_max_gain) << "\n";
        out.stream() << "  relay-propagated noise, pseudo-optimal scheme: "
                     << num(dom.upper_noise_pseudo) << "\n";
        out.stream() << "certificate: use " << cert.scheme << "\n";
        out.stream() << "  achieved rate " << num(cert.rate) << " bits\n";
        out.stream() << "  upper bound   " << num(cert.bound) << " bits\n";
        out.stream() << "  guaranteed gap at most " << num(cert.gap_bound) << " bits"
                     << (cert.dominance == anc::Dominance::Neither
                             ? " (epsilon " + num(cert.epsilon) + ")"
                             : "")
                     << "\n";
    }
    return 0;
}

int cmd_sweep(const Options& opt, const std::string& tmpl_path, const std::string& param,
              const std::string& range, bool gap, int l0) {
    const std::string text = slurp(tmpl_path);
    std::fprintf(stderr, "ancrate %s input=%s fnv64=%016" PRIx64 "\n", ANCRATE_VERSION,
                 tmpl_path.c_str(), fnv1a64(text));
    double lo = 0, hi = 0;
    int steps = 0;
    if (std::sscanf(range.c_str(), "%lf:%lf:%d", &lo, &hi, &steps) != 3 || steps < 1)
        throw std::invalid_argument("range must be lo:hi:steps");
    Output out(opt.out);
    if (gap) {
        out.stream() << "param,R_up,R_low,delta,delta0\n";
        for (int i = 0; i < steps; ++i) {
            const double v = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
            const anc::Network net = anc::parse_network(text, std::make_pair(param, v));
            const anc::LayeredNetwork layered = as_layered_net(net);
            const anc::LowerBoundReport rep = anc::anc_lower_bound(layered, l0);
            out.stream() << num(v) << "," << num(rep.upper) << "," << num(rep.value) << ","
                         << num(rep.gap) << "," << num(rep.delta0) << "\n";
        }
        return 0;
    }
    out.stream() << param << ",scheme1,scheme2,scheme3,R_up\n";
    for (int i = 0; i < steps; ++i) {
        const double v = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
        const anc::Network net = anc::parse_network(text, std::make_pair(param, v));
        const anc::LayeredNetwork layered = as_layered_net(net);
        auto rate_of = [&](const anc::GainAssignment& g) {
            return anc::rate_from_snr(anc::destination_snr(layered, g).snr);
        };
        out.stream() << num(v) << "," << num(rate_of(anc::scheme_max_gain(layered))) << ","
                     << num(rate_of(anc::scheme_pseudo_optimal(layered))) << ","
                     << num(rate_of(anc::scheme_selection(layered))) << ","
                     << num(anc::anc_upper_bound(layered).value) << "\n";
    }
    return 0;
}

void emit_polyline(std::ostream& os, const char* name, const anc::RegionPolyline& poly) {
    os << "# " << name << "\n";
    os << "R1,R2\n";
    for (const auto& p : poly.pts) os << num(p[0]) << "," << num(p[1]) << "\n";
    os << "\n";
}

int cmd_mac_region(const Options& opt, const std::string& net_path, int resolution,
                   const std::string& scheme_list) {
    const anc::Network net = load(net_path);
    if (!std::holds_alternative<anc::TwoHopMac>(net))
        throw std::invalid_argument("mac-region needs a mac2 network");
    const anc::TwoHopMac& mac = std::get<anc::TwoHopMac>(net);
    const anc::ThetaFrame frame = anc::theta_frame(mac);
    const double theta_sum = anc::theta_sum_opt(frame);

    const std::vector<anc::Vec> all = anc::default_mac_schemes(mac);
    const std::vector<std::string> names{"sum", "r1", "r2", "caps"};
    std::vector<anc::Vec> schemes;
    std::vector<std::string> used;
    {
        std::istringstream ls(scheme_list);
        std::string tok;
        while (std::getline(ls, tok, ',')) {
            const auto it = std::find(names.begin(), names.end(), tok);
            if (it == names.end()) throw std::invalid_argument("unknown scheme '" + tok + "'");
            schemes.push_back(all[static_cast<size_t>(it - names.begin())]);
            used.push_back(tok);
        }
    }
    if (schemes.empty()) throw std::invalid_argument("empty scheme list");

    const anc::RegionPolyline inner = anc::dynamic_inner_region(mac, schemes);
    const anc::RegionPolyline outer1 = anc::outer_boundary_1(frame, resolution);
    const anc::RegionPolyline outer2 = anc::pentagon_boundary(anc::outer_bound_2(mac));
    const anc::RegionPolyline outer = anc::outer_bound_intersection(mac, resolution);
    const auto gaps = anc::region_gaps(inner, outer);

    Output out(opt.out);
    emit_polyline(out.stream(), "inner", inner);
    emit_polyline(out.stream(), "outer1", outer1);
    emit_polyline(out.stream(), "outer2", outer2);
    emit_polyline(out.stream(), "outer", outer);

    json summary;
    summary["alpha"] = frame.alpha;
    summary["beta"] = frame.beta;
    summary["theta_sum_opt"] = theta_sum;
    summary["gaps"] = {{"r1_max", gaps[0]}, {"r2_max", gaps[1]}, {"sum", gaps[2]}};
    for (size_t s = 0; s < schemes.size(); ++s) summary["schemes"][used[s]] = schemes[s];
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int cmd_oracle(const Options& opt, const std::string& net_path, int grid, int refine,
               std::int64_t mc_samples, const std::string& scheme) {
    const anc::Network net = load(net_path);
    Output out(opt.out);
    const anc::LayeredNetwork layered = as_layered_net(net);
    const anc::RelayDag dag = std::holds_alternative<anc::RelayDag>(net)
                                  ? std::get<anc::RelayDag>(net)
                                  : layered.to_dag();
    const anc::GridSearchResult res = anc::grid_search_best_gains(dag, grid, refine);
    if (opt.csv()) {
        out.stream() << "node,beta\n";
        for (const auto& [id, beta] : res.gains.beta)
            out.stream() << id << "," << num(beta) << "\n";
        out.stream() << "best_rate_bits\n" << num(res.rate) << "\n";
    } else {
        out.stream() << "grid search (" << grid << " points/dim, " << refine << " rounds)\n";
        for (const auto& [id, beta] : res.gains.beta)
            out.stream() << "  beta[" << id << "] = " << num(beta) << "\n";
        out.stream() << "best rate " << num(res.rate) << " bits/use\n";
    }
    if (mc_samples > 0) {
        const anc::GainAssignment g = gains_for(layered, scheme);
        anc::SimConfig cfg;
        cfg.samples = mc_samples;
        cfg.seed = opt.seed;
        const anc::SimResult sim = anc::monte_carlo_sim(dag, g, cfg);
        const double analytic = anc::destination_snr(dag, g).snr;
        if (opt.csv()) {
            out.stream() << "snr_empirical,snr_analytic\n"
                         << num(sim.snr) << "," << num(analytic) << "\n";
        } else {
            out.stream() << "monte carlo (" << mc_samples << " samples, scheme " << scheme
                         << "): snr " << num(sim.snr) << " vs analytic " << num(analytic)
                         << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rate analysis for amplify-and-forward relay networks"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_option("--out", opt.out, "write results to a file instead of stdout");
    app.add_option("--seed", opt.seed, "seed for randomized search and simulation");
    app.add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"text", "csv"}));

    std::string net_path, cuts_path, scheme = "max", param = "a", range, scheme_list =
        "sum,r1,r2,caps";
    int l0 = 1, resolution = 2048, grid = 17, refine = 3;
    std::int64_t mc_samples = 0;
    bool gap = false;

    CLI::App* bounds = app.add_subcommand("bounds", "per-layer rate upper bounds");
    bounds->add_option("net", net_path)->required();
    bounds->add_option("--cuts", cuts_path, "file with one cut node set per line");

    CLI::App* rate = app.add_subcommand("rate", "rate of an amplification scheme");
    rate->add_option("net", net_path)->required();
    rate->add_option("--scheme", scheme, "max|pseudo|select|mixed:<l0>|file:<path>");

    CLI::App* certify = app.add_subcommand("certify", "noise dominance and gap certificate");
    certify->add_option("net", net_path)->required();

    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep over a network template");
    sweep->add_option("net", net_path)->required();
    sweep->add_option("--param", param, "template parameter name");
    sweep->add_option("--range", range, "lo:hi:steps")->required();
    sweep->add_flag("--gap", gap, "emit upper/lower bound gap columns");
    sweep->add_option("--l0", l0, "anchor layer for --gap");

    CLI::App* macr = app.add_subcommand("mac-region", "two-source rate region boundaries");
    macr->add_option("net", net_path)->required();
    macr->add_option("--resolution", resolution, "boundary sampling resolution");
    macr->add_option("--schemes", scheme_list, "comma list from sum,r1,r2,caps");

    CLI::App* oracle = app.add_subcommand("oracle", "brute-force search and simulation checks");
    oracle->add_option("net", net_path)->required();
    oracle->add_option("--grid", grid, "grid points per dimension");
    oracle->add_option("--refine", refine, "refinement rounds");
    oracle->add_option("--mc-samples", mc_samples, "also simulate a scheme");
    oracle->add_option("--scheme", scheme, "scheme for --mc-samples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (bounds->parsed()) return cmd_bounds(opt, net_path, cuts_path);
        if (rate->parsed()) return cmd_rate(opt, net_path, scheme);
        if (certify->parsed()) return cmd_certify(opt, net_path);
        if (sweep->parsed()) return cmd_sweep(opt, net_path, param, range, gap, l0);
        if (macr->parsed()) return cmd_mac_region(opt, net_path, resolution, scheme_list);
        if (oracle->parsed()) return cmd_oracle(opt, net_path, grid, refine, mc_samples, scheme);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
