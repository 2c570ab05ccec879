#include "anc/network.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <sstream>

namespace anc {

namespace {

bool close(double a, double b, double rel = 1e-12) {
    const double scale = std::max({std::fabs(a), std::fabs(b), 1.0});
    return std::fabs(a - b) <= rel * scale;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// RelayDag

void RelayDag::finalize() {
    if (source.empty() || dest.empty()) throw ValidationError("missing source or destination");
    if (source == dest) throw ValidationError("source and destination must differ");
    if (source_power < 0) throw ValidationError("negative source power");
    for (const auto& [id, cap] : relay_caps) {
        if (id == source || id == dest) throw ValidationError("relay id collides with source/destination: " + id);
        if (!(cap > 0)) throw ValidationError("non-positive power cap at relay " + id);
    }

    std::set<std::string> names{source, dest};
    for (const auto& [id, _] : relay_caps) names.insert(id);
    for (const Edge& e : edges) {
        if (!names.count(e.from)) throw ValidationError("edge from unknown node " + e.from);
        if (!names.count(e.to)) throw ValidationError("edge to unknown node " + e.to);
        if (!(e.gain > 0)) throw ValidationError("non-positive channel gain on edge " + e.from + "->" + e.to);
        if (e.to == source) throw ValidationError("source has an incoming edge");
        if (e.from == dest) throw ValidationError("destination has an outgoing edge");
    }

    nodes.assign(names.begin(), names.end());
    std::sort(nodes.begin(), nodes.end());
    index.clear();
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) index[nodes[i]] = i;

    in_edges.assign(nodes.size(), {});
    out_edges.assign(nodes.size(), {});
    std::set<std::pair<std::string, std::string>> seen;
    for (const Edge& e : edges) {
        if (!seen.insert({e.from, e.to}).second)
            throw ValidationError("duplicate edge " + e.from + "->" + e.to);
        const int u = index.at(e.from);
        const int v = index.at(e.to);
        out_edges[u].push_back({v, e.gain});
        in_edges[v].push_back({u, e.gain});
    }
    for (auto& adj : in_edges) std::sort(adj.begin(), adj.end());
    for (auto& adj : out_edges) std::sort(adj.begin(), adj.end());

    // Kahn topological sort; leftover nodes witness a cycle.
    std::vector<int> indeg(nodes.size(), 0);
    for (size_t v = 0; v < nodes.size(); ++v) indeg[v] = static_cast<int>(in_edges[v].size());
    std::deque<int> ready;
    for (size_t v = 0; v < nodes.size(); ++v)
        if (indeg[v] == 0) ready.push_back(static_cast<int>(v));
    topo.clear();
    while (!ready.empty()) {
        const int u = ready.front();
        ready.pop_front();
        topo.push_back(u);
        for (const auto& [v, g] : out_edges[u])
            if (--indeg[v] == 0) ready.push_back(v);
    }
    if (topo.size() != nodes.size()) throw ValidationError("cycle found");

    // Every relay must lie on some S->D path.
    std::vector<char> from_s(nodes.size(), 0), to_d(nodes.size(), 0);
    from_s[index.at(source)] = 1;
    for (const int u : topo)
        if (from_s[u])
            for (const auto& [v, g] : out_edges[u]) from_s[v] = 1;
    to_d[index.at(dest)] = 1;
    for (auto it = topo.rbegin(); it != topo.rend(); ++it)
        if (to_d[*it])
            for (const auto& [u, g] : in_edges[*it]) to_d[u] = 1;
    for (const auto& [id, _] : relay_caps) {
        const int v = index.at(id);
        if (!from_s[v] || !to_d[v])
            throw ValidationError("relay " + id + " lies on no source-destination path");
    }
    if (!from_s[index.at(dest)]) throw ValidationError("destination unreachable from source");
}

bool RelayDag::operator==(const RelayDag& o) const {
    if (source != o.source || dest != o.dest) return false;
    if (!close(source_power, o.source_power)) return false;
    if (relay_caps.size() != o.relay_caps.size()) return false;
    for (const auto& [id, cap] : relay_caps) {
        auto it = o.relay_caps.find(id);
        if (it == o.relay_caps.end() || !close(cap, it->second)) return false;
    }
    auto key = [](const Edge& e) { return std::make_pair(e.from, e.to); };
    std::vector<Edge> a = edges, b = o.edges;
    auto lt = [&](const Edge& x, const Edge& y) { return key(x) < key(y); };
    std::sort(a.begin(), a.end(), lt);
    std::sort(b.begin(), b.end(), lt);
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (key(a[i]) != key(b[i]) || !close(a[i].gain, b[i].gain)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// LayeredNetwork

int LayeredNetwork::layer_size(int l) const {
    const int L = layer_count();
    if (l < 0 || l > L) throw std::invalid_argument("layer index out of range");
    if (l == 0) return 1;
    return hops[static_cast<size_t>(l) - 1].rows;
}

Vec LayeredNetwork::h0() const {
    Vec v(static_cast<size_t>(hops[0].rows));
    for (int r = 0; r < hops[0].rows; ++r) v[static_cast<size_t>(r)] = hops[0](r, 0);
    return v;
}

Vec LayeredNetwork::h_last() const {
    const Mat& m = hops.back();
    Vec v(static_cast<size_t>(m.cols));
    for (int c = 0; c < m.cols; ++c) v[static_cast<size_t>(c)] = m(0, c);
    return v;
}

void LayeredNetwork::finalize() {
    const int L = layer_count();
    if (L < 1) throw ValidationError("layered network needs at least one hop");
    if (source_power < 0) throw ValidationError("negative source power");
    if (hops[0].cols != 1) throw ValidationError("first hop must have a single transmitter column");
    if (hops.back().rows != 1) throw ValidationError("last hop must have a single receiver row");
    for (int l = 0; l + 1 < L; ++l) {
        if (hops[static_cast<size_t>(l)].rows != hops[static_cast<size_t>(l) + 1].cols)
            throw ValidationError("dimension mismatch between hop " + std::to_string(l) +
                                  " and hop " + std::to_string(l + 1));
    }
    for (const Mat& m : hops)
        for (double g : m.a)
            if (g < 0 || !std::isfinite(g))
                throw ValidationError("non-positive channel gain");  // zeros mark absent edges

    if (static_cast<int>(caps.size()) != std::max(0, L - 1))
        throw ValidationError("power caps must cover every relay layer");
    for (int l = 1; l < L; ++l) {
        if (static_cast<int>(caps[static_cast<size_t>(l) - 1].size()) != layer_size(l))
            throw ValidationError("power caps at layer " + std::to_string(l) +
                                  " do not match the layer size");
        for (double c : caps[static_cast<size_t>(l) - 1])
            if (!(c > 0)) throw ValidationError("non-positive power cap");
    }

    // Each relay needs signal in and a way out; otherwise its received-power
    // bound degenerates.
    for (int l = 1; l < L; ++l) {
        const Mat& in = hops[static_cast<size_t>(l) - 1];
        const Mat& out = hops[static_cast<size_t>(l)];
        for (int i = 0; i < layer_size(l); ++i) {
            double in_sum = 0.0, out_sum = 0.0;
            for (int c = 0; c < in.cols; ++c) in_sum += in(i, c);
            for (int r = 0; r < out.rows; ++r) out_sum += out(r, i);
            if (in_sum == 0.0)
                throw ValidationError("relay layer " + std::to_string(l) + " node " +
                                      std::to_string(i) + " has no incoming gain");
            if (out_sum == 0.0)
                throw ValidationError("relay layer " + std::to_string(l) + " node " +
                                      std::to_string(i) + " has no outgoing gain");
        }
    }

    if (ids.empty()) {
        ids.resize(static_cast<size_t>(std::max(0, L - 1)));
        for (int l = 1; l < L; ++l) {
            ids[static_cast<size_t>(l) - 1].clear();
            for (int i = 0; i < layer_size(l); ++i)
                ids[static_cast<size_t>(l) - 1].push_back("L" + std::to_string(l) + "." +
                                                          std::to_string(i));
        }
    } else {
        if (static_cast<int>(ids.size()) != std::max(0, L - 1))
            throw ValidationError("node ids must cover every relay layer");
        for (int l = 1; l < L; ++l)
            if (static_cast<int>(ids[static_cast<size_t>(l) - 1].size()) != layer_size(l))
                throw ValidationError("node ids at layer " + std::to_string(l) +
                                      " do not match the layer size");
    }
}

RelayDag LayeredNetwork::to_dag() const {
    RelayDag d;
    d.source = source_id;
    d.dest = dest_id;
    d.source_power = source_power;
    const int L = layer_count();
    auto node_id = [&](int l, int i) -> std::string {
        if (l == 0) return source_id;
        if (l == L) return dest_id;
        return ids[static_cast<size_t>(l) - 1][static_cast<size_t>(i)];
    };
    for (int l = 1; l < L; ++l)
        for (int i = 0; i < layer_size(l); ++i)
            d.relay_caps[node_id(l, i)] = caps[static_cast<size_t>(l) - 1][static_cast<size_t>(i)];
    for (int l = 0; l < L; ++l) {
        const Mat& m = hops[static_cast<size_t>(l)];
        for (int r = 0; r < m.rows; ++r)
            for (int c = 0; c < m.cols; ++c)
                if (m(r, c) > 0) d.edges.push_back({node_id(l, c), node_id(l + 1, r), m(r, c)});
    }
    d.finalize();
    return d;
}

bool LayeredNetwork::operator==(const LayeredNetwork& o) const {
    if (layer_count() != o.layer_count()) return false;
    if (!close(source_power, o.source_power)) return false;
    for (int l = 0; l < layer_count(); ++l) {
        const Mat& a = hops[static_cast<size_t>(l)];
        const Mat& b = o.hops[static_cast<size_t>(l)];
        if (a.rows != b.rows || a.cols != b.cols) return false;
        for (size_t i = 0; i < a.a.size(); ++i)
            if (!close(a.a[i], b.a[i])) return false;
    }
    for (size_t l = 0; l < caps.size(); ++l) {
        if (caps[l].size() != o.caps[l].size()) return false;
        for (size_t i = 0; i < caps[l].size(); ++i)
            if (!close(caps[l][i], o.caps[l][i])) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// TwoHopMac

void TwoHopMac::finalize() {
    if (n < 2) throw ValidationError("a two-hop MAC needs at least two relays");
    if (static_cast<int>(h01.size()) != n || static_cast<int>(h02.size()) != n ||
        static_cast<int>(h1.size()) != n || static_cast<int>(caps.size()) != n)
        throw ValidationError("channel vectors and caps must all have length n");
    for (double v : h01)
        if (!(v > 0)) throw ValidationError("non-positive channel gain");
    for (double v : h02)
        if (!(v > 0)) throw ValidationError("non-positive channel gain");
    for (double v : h1)
        if (!(v > 0)) throw ValidationError("non-positive channel gain");
    for (double v : caps)
        if (!(v > 0)) throw ValidationError("non-positive power cap");
    if (ps1 < 0 || ps2 < 0) throw ValidationError("negative source power");
    if (ids.empty())
        for (int i = 0; i < n; ++i) ids.push_back("r" + std::to_string(i));
    if (static_cast<int>(ids.size()) != n) throw ValidationError("node ids do not match n");
}

bool TwoHopMac::operator==(const TwoHopMac& o) const {
    if (n != o.n || !close(ps1, o.ps1) || !close(ps2, o.ps2)) return false;
    for (int i = 0; i < n; ++i) {
        const auto s = static_cast<size_t>(i);
        if (!close(h01[s], o.h01[s]) || !close(h02[s], o.h02[s]) || !close(h1[s], o.h1[s]) ||
            !close(caps[s], o.caps[s]))
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// GainAssignment

double GainAssignment::at(const std::string& id) const {
    auto it = beta.find(id);
    if (it == beta.end()) throw std::invalid_argument("missing gain entry for node " + id);
    return it->second;
}

bool GainAssignment::approx_equal(const GainAssignment& o, double rel_tol) const {
    if (beta.size() != o.beta.size()) return false;
    for (const auto& [id, v] : beta) {
        auto it = o.beta.find(id);
        if (it == o.beta.end() || !close(v, it->second, rel_tol)) return false;
    }
    return true;
}

Vec layer_gains(const LayeredNetwork& net, const GainAssignment& g, int l) {
    if (l < 1 || l >= net.layer_count()) throw std::invalid_argument("not a relay layer");
    Vec out;
    for (const std::string& id : net.ids[static_cast<size_t>(l) - 1]) out.push_back(g.at(id));
    return out;
}

GainAssignment assignment_from_layers(const LayeredNetwork& net,
                                      const std::vector<Vec>& per_layer) {
    GainAssignment g;
    for (int l = 1; l < net.layer_count(); ++l) {
        const Vec& v = per_layer[static_cast<size_t>(l) - 1];
        for (int i = 0; i < net.layer_size(l); ++i)
            g.beta[net.ids[static_cast<size_t>(l) - 1][static_cast<size_t>(i)]] =
                v[static_cast<size_t>(i)];
    }
    return g;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Line {
    int number = 0;
    std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
    std::vector<Line> out;
    int lineno = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        const size_t nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        Line l;
        l.number = lineno;
        std::string tok;
        for (char c : line) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                if (!tok.empty()) l.tokens.push_back(std::move(tok)), tok.clear();
            } else {
                tok.push_back(c);
            }
        }
        if (!tok.empty()) l.tokens.push_back(std::move(tok));
        if (!l.tokens.empty()) out.push_back(std::move(l));
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return out;
}

// Value grammar: factor ('*' factor)*, factor = number | var | var '^' uint.
// Variables are only legal when a sweep binding is supplied.
double parse_value(const std::string& tok, int lineno,
                   const std::optional<std::pair<std::string, double>>& binding) {
    double product = 1.0;
    size_t pos = 0;
    bool first = true;
    while (pos <= tok.size()) {
        size_t star = tok.find('*', pos);
        std::string factor = tok.substr(pos, star == std::string::npos ? tok.size() - pos : star - pos);
        if (factor.empty()) throw ParseError(lineno, "malformed value '" + tok + "'");
        double v;
        const size_t caret = factor.find('^');
        std::string base = caret == std::string::npos ? factor : factor.substr(0, caret);
        if (binding && base == binding->first) {
            v = binding->second;
            if (caret != std::string::npos) {
                int exp = 0;
                auto [p, ec] = std::from_chars(factor.data() + caret + 1,
                                               factor.data() + factor.size(), exp);
                if (ec != std::errc() || p != factor.data() + factor.size() || exp < 0)
                    throw ParseError(lineno, "malformed exponent in '" + tok + "'");
                v = std::pow(v, exp);
            }
        } else {
            if (caret != std::string::npos)
                throw ParseError(lineno, "exponent on a numeric literal in '" + tok + "'");
            char* end = nullptr;
            v = std::strtod(factor.c_str(), &end);
            if (end != factor.c_str() + factor.size()) {
                if (!binding)
                    throw ParseError(lineno, "unbound parameter or bad number '" + factor + "'");
                throw ParseError(lineno, "bad number '" + factor + "'");
            }
        }
        product *= v;
        first = false;
        if (star == std::string::npos) break;
        pos = star + 1;
    }
    if (first) throw ParseError(lineno, "empty value");
    return product;
}

Vec parse_values(const Line& l, size_t start,
                 const std::optional<std::pair<std::string, double>>& binding) {
    Vec out;
    for (size_t i = start; i < l.tokens.size(); ++i)
        out.push_back(parse_value(l.tokens[i], l.number, binding));
    return out;
}

RelayDag parse_dag(const std::vector<Line>& lines, size_t begin,
                   const std::optional<std::pair<std::string, double>>& binding) {
    RelayDag d;
    bool have_power = false;
    for (size_t i = begin; i < lines.size(); ++i) {
        const Line& l = lines[i];
        const std::string& kw = l.tokens[0];
        if (kw == "source" && l.tokens.size() == 2) {
            if (!d.source.empty()) throw ParseError(l.number, "duplicate source");
            d.source = l.tokens[1];
        } else if (kw == "dest" && l.tokens.size() == 2) {
            if (!d.dest.empty()) throw ParseError(l.number, "duplicate dest");
            d.dest = l.tokens[1];
        } else if (kw == "relay" && l.tokens.size() == 3) {
            if (d.relay_caps.count(l.tokens[1]))
                throw ParseError(l.number, "duplicate relay " + l.tokens[1]);
            d.relay_caps[l.tokens[1]] = parse_value(l.tokens[2], l.number, binding);
        } else if (kw == "edge" && l.tokens.size() == 4) {
            d.edges.push_back({l.tokens[1], l.tokens[2], parse_value(l.tokens[3], l.number, binding)});
        } else if (kw == "source_power" && l.tokens.size() == 2) {
            if (have_power) throw ParseError(l.number, "duplicate source_power");
            d.source_power = parse_value(l.tokens[1], l.number, binding);
            have_power = true;
        } else {
            throw ParseError(l.number, "unknown or malformed directive '" + kw + "'");
        }
    }
    if (!have_power) throw ValidationError("missing source_power");
    d.finalize();
    return d;
}

LayeredNetwork parse_layered(const std::vector<Line>& lines, size_t begin,
                             const std::optional<std::pair<std::string, double>>& binding) {
    LayeredNetwork net;
    bool have_power = false;
    std::map<int, Vec> caps;
    for (size_t i = begin; i < lines.size(); ++i) {
        const Line& l = lines[i];
        const std::string& kw = l.tokens[0];
        if (kw == "hop" && l.tokens.size() >= 3) {
            const std::string& dims = l.tokens[1];
            const size_t x = dims.find('x');
            if (x == std::string::npos) throw ParseError(l.number, "hop dims must be RxC");
            int rows = 0, cols = 0;
            auto r1 = std::from_chars(dims.data(), dims.data() + x, rows);
            auto r2 = std::from_chars(dims.data() + x + 1, dims.data() + dims.size(), cols);
            if (r1.ec != std::errc() || r2.ec != std::errc() || rows <= 0 || cols <= 0)
                throw ParseError(l.number, "hop dims must be RxC");
            Vec vals = parse_values(l, 2, binding);
            if (static_cast<int>(vals.size()) != rows * cols)
                throw ParseError(l.number, "hop expects " + std::to_string(rows * cols) +
                                               " entries, got " + std::to_string(vals.size()));
            Mat m(rows, cols);
            m.a = std::move(vals);
            net.hops.push_back(std::move(m));
        } else if (kw == "caps" && l.tokens.size() >= 3) {
            int layer = 0;
            auto r = std::from_chars(l.tokens[1].data(), l.tokens[1].data() + l.tokens[1].size(), layer);
            if (r.ec != std::errc() || layer < 1) throw ParseError(l.number, "caps needs a relay layer index");
            if (caps.count(layer)) throw ParseError(l.number, "duplicate caps for layer " + std::to_string(layer));
            caps[layer] = parse_values(l, 2, binding);
        } else if (kw == "source_power" && l.tokens.size() == 2) {
            if (have_power) throw ParseError(l.number, "duplicate source_power");
            net.source_power = parse_value(l.tokens[1], l.number, binding);
            have_power = true;
        } else {
            throw ParseError(l.number, "unknown or malformed directive '" + kw + "'");
        }
    }
    if (!have_power) throw ValidationError("missing source_power");
    const int L = net.layer_count();
    net.caps.resize(static_cast<size_t>(std::max(0, L - 1)));
    for (const auto& [layer, v] : caps) {
        if (layer > L - 1) throw ValidationError("caps given for layer " + std::to_string(layer) +
                                                 " but network has " + std::to_string(L) + " hops");
        net.caps[static_cast<size_t>(layer) - 1] = v;
    }
    net.finalize();
    return net;
}

TwoHopMac parse_mac(const std::vector<Line>& lines, size_t begin,
                    const std::optional<std::pair<std::string, double>>& binding) {
    TwoHopMac mac;
    bool have_powers = false;
    std::map<std::string, Vec> vecs;
    for (size_t i = begin; i < lines.size(); ++i) {
        const Line& l = lines[i];
        const std::string& kw = l.tokens[0];
        if ((kw == "h01" || kw == "h02" || kw == "h1" || kw == "caps") && l.tokens.size() >= 2) {
            if (vecs.count(kw)) throw ParseError(l.number, "duplicate " + kw);
            vecs[kw] = parse_values(l, 1, binding);
        } else if (kw == "source_powers" && l.tokens.size() == 3) {
            if (have_powers) throw ParseError(l.number, "duplicate source_powers");
            mac.ps1 = parse_value(l.tokens[1], l.number, binding);
            mac.ps2 = parse_value(l.tokens[2], l.number, binding);
            have_powers = true;
        } else {
            throw ParseError(l.number, "unknown or malformed directive '" + kw + "'");
        }
    }
    if (!have_powers) throw ValidationError("missing source_powers");
    for (const char* k : {"h01", "h02", "h1", "caps"})
        if (!vecs.count(k)) throw ValidationError(std::string("missing ") + k);
    mac.h01 = vecs["h01"];
    mac.h02 = vecs["h02"];
    mac.h1 = vecs["h1"];
    mac.caps = vecs["caps"];
    mac.n = static_cast<int>(mac.h01.size());
    mac.finalize();
    return mac;
}

}  // namespace

Network parse_network(std::string_view text,
                      std::optional<std::pair<std::string, double>> binding) {
    const std::vector<Line> lines = tokenize(text);
    if (lines.empty()) throw ParseError(1, "empty document");
    const Line& head = lines[0];
    if (head.tokens[0] != "type" || head.tokens.size() != 2)
        throw ParseError(head.number, "document must start with 'type dag|layered|mac2'");
    const std::string& kind = head.tokens[1];
    if (kind == "dag") return parse_dag(lines, 1, binding);
    if (kind == "layered") return parse_layered(lines, 1, binding);
    if (kind == "mac2") return parse_mac(lines, 1, binding);
    throw ParseError(head.number, "unknown network type '" + kind + "'");
}

Network parse_network_file(const std::string& path,
                           std::optional<std::pair<std::string, double>> binding) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_network(ss.str(), std::move(binding));
}

std::string render_network(const Network& net) {
    std::ostringstream out;
    if (const RelayDag* d = std::get_if<RelayDag>(&net)) {
        out << "type dag\n";
        out << "source " << d->source << "\n";
        out << "dest " << d->dest << "\n";
        out << "source_power " << fmt(d->source_power) << "\n";
        for (const auto& [id, cap] : d->relay_caps) out << "relay " << id << " " << fmt(cap) << "\n";
        std::vector<Edge> es = d->edges;
        std::sort(es.begin(), es.end(), [](const Edge& a, const Edge& b) {
            return std::tie(a.from, a.to) < std::tie(b.from, b.to);
        });
        for (const Edge& e : es)
            out << "edge " << e.from << " " << e.to << " " << fmt(e.gain) << "\n";
    } else if (const LayeredNetwork* ln = std::get_if<LayeredNetwork>(&net)) {
        out << "type layered\n";
        out << "source_power " << fmt(ln->source_power) << "\n";
        for (const Mat& m : ln->hops) {
            out << "hop " << m.rows << "x" << m.cols;
            for (double v : m.a) out << " " << fmt(v);
            out << "\n";
        }
        for (size_t l = 0; l < ln->caps.size(); ++l) {
            out << "caps " << (l + 1);
            for (double v : ln->caps[l]) out << " " << fmt(v);
            out << "\n";
        }
    } else {
        const TwoHopMac& m = std::get<TwoHopMac>(net);
        out << "type mac2\n";
        out << "source_powers " << fmt(m.ps1) << " " << fmt(m.ps2) << "\n";
        auto vec = [&](const char* name, const Vec& v) {
            out << name;
            for (double x : v) out << " " << fmt(x);
            out << "\n";
        };
        vec("h01", m.h01);
        vec("h02", m.h02);
        vec("h1", m.h1);
        vec("caps", m.caps);
    }
    return out.str();
}

LayeredNetwork as_layered(const RelayDag& net) {
    // Depth from the source must be unique per node; scan edges in
    // topological order and flag the first conflict.
    std::vector<int> depth(net.nodes.size(), -1);
    depth[static_cast<size_t>(net.index.at(net.source))] = 0;
    for (const int u : net.topo) {
        if (depth[static_cast<size_t>(u)] < 0) continue;
        for (const auto& [v, g] : net.out_edges[static_cast<size_t>(u)]) {
            const int want = depth[static_cast<size_t>(u)] + 1;
            if (depth[static_cast<size_t>(v)] < 0) {
                depth[static_cast<size_t>(v)] = want;
            } else if (depth[static_cast<size_t>(v)] != want) {
                throw ValidationError("not layered: node " + net.nodes[static_cast<size_t>(v)] +
                                      " sits at depths " +
                                      std::to_string(depth[static_cast<size_t>(v)]) + " and " +
                                      std::to_string(want));
            }
        }
    }

    const int L = depth[static_cast<size_t>(net.index.at(net.dest))];
    std::vector<std::vector<int>> layers(static_cast<size_t>(L) + 1);
    for (size_t v = 0; v < net.nodes.size(); ++v) {
        if (depth[v] < 0) throw ValidationError("node " + net.nodes[v] + " unreachable from source");
        if (static_cast<int>(v) != net.index.at(net.dest) && depth[v] == L &&
            net.nodes[v] != net.dest)
            throw ValidationError("not layered: relay " + net.nodes[v] +
                                  " shares the destination layer");
        layers[static_cast<size_t>(depth[v])].push_back(static_cast<int>(v));
    }
    if (layers[0].size() != 1) throw ValidationError("not layered: several nodes at depth 0");
    if (layers[static_cast<size_t>(L)].size() != 1)
        throw ValidationError("not layered: several nodes at the destination depth");

    LayeredNetwork out;
    out.source_power = net.source_power;
    out.source_id = net.source;
    out.dest_id = net.dest;
    for (int l = 0; l < L; ++l) {
        const auto& from = layers[static_cast<size_t>(l)];
        const auto& to = layers[static_cast<size_t>(l) + 1];
        Mat m(static_cast<int>(to.size()), static_cast<int>(from.size()));
        for (size_t c = 0; c < from.size(); ++c)
            for (const auto& [v, g] : net.out_edges[static_cast<size_t>(from[c])]) {
                const auto it = std::find(to.begin(), to.end(), v);
                // Positional lookup cannot fail: every out-edge target has depth l+1.
                m(static_cast<int>(it - to.begin()), static_cast<int>(c)) = g;
            }
        out.hops.push_back(std::move(m));
    }
    for (int l = 1; l < L; ++l) {
        std::vector<double> cap_row;
        std::vector<std::string> id_row;
        for (const int v : layers[static_cast<size_t>(l)]) {
            id_row.push_back(net.nodes[static_cast<size_t>(v)]);
            cap_row.push_back(net.relay_caps.at(net.nodes[static_cast<size_t>(v)]));
        }
        out.caps.push_back(std::move(cap_row));
        out.ids.push_back(std::move(id_row));
    }
    out.finalize();
    return out;
}

LayeredNetwork as_layered(const LayeredNetwork& net) { return net; }

}  // namespace anc
