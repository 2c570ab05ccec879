#ifndef ANC_NETWORK_HPP
#define ANC_NETWORK_HPP

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "anc/linalg.hpp"

namespace anc {

// Malformed input text: line-positioned.
class ParseError : public std::runtime_error {
  public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

// Structurally well-formed input that violates a network invariant.
// The message names the violated invariant.
class ValidationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Edge {
    std::string from;
    std::string to;
    double gain = 0.0;
};

// General acyclic relay network with one source and one destination.
// Channel gains are positive amplitudes, every non-source node adds
// unit-variance noise, relays carry individual transmit power caps.
struct RelayDag {
    std::string source;
    std::string dest;
    double source_power = 0.0;
    std::map<std::string, double> relay_caps;  // relay id -> power cap
    std::vector<Edge> edges;

    // Derived state (filled by finalize): lexicographic node order fixes
    // all vector layouts.
    std::vector<std::string> nodes;
    std::map<std::string, int> index;
    std::vector<std::vector<std::pair<int, double>>> in_edges;
    std::vector<std::vector<std::pair<int, double>>> out_edges;
    std::vector<int> topo;  // topological order, node indices

    void finalize();  // validates invariants, builds the derived state
    bool is_relay(const std::string& id) const { return relay_caps.count(id) != 0; }
    int node_count() const { return static_cast<int>(nodes.size()); }

    bool operator==(const RelayDag& o) const;
};

// Relay network whose nodes form layers with edges only between
// consecutive layers. hops[l] maps the layer-l transmit vector to the
// layer-(l+1) receive vector; layer 0 is the source, layer L the
// destination, so hops[0] has one column and hops[L-1] one row.
struct LayeredNetwork {
    std::vector<Mat> hops;
    double source_power = 0.0;
    std::vector<std::vector<double>> caps;     // caps[l-1][i] for relay layer l
    std::vector<std::vector<std::string>> ids; // ids[l-1][i], canonical unless converted
    std::string source_id = "S";
    std::string dest_id = "D";

    int layer_count() const { return static_cast<int>(hops.size()); }
    int layer_size(int l) const;  // l in [0, L]; 1 at both ends
    Vec h0() const;               // broadcast column of hops[0]
    Vec h_last() const;           // access row of hops[L-1]

    void finalize();
    RelayDag to_dag() const;

    // Structural equality: gains, powers, caps. Ids are presentation.
    bool operator==(const LayeredNetwork& o) const;
};

// Two sources, one relay layer, one destination.
struct TwoHopMac {
    int n = 0;
    Vec h01;  // source 1 -> relays
    Vec h02;  // source 2 -> relays
    Vec h1;   // relays -> destination
    double ps1 = 0.0;
    double ps2 = 0.0;
    Vec caps;
    std::vector<std::string> ids;

    void finalize();
    bool operator==(const TwoHopMac& o) const;
};

// One amplification gain per relay node; an AF scheme.
struct GainAssignment {
    std::map<std::string, double> beta;

    double at(const std::string& id) const;
    bool approx_equal(const GainAssignment& o, double rel_tol = 1e-12) const;
};

// Gains of one relay layer in layer order (the diagonal of B_l).
Vec layer_gains(const LayeredNetwork& net, const GainAssignment& g, int l);
GainAssignment assignment_from_layers(const LayeredNetwork& net,
                                      const std::vector<Vec>& per_layer);

using Network = std::variant<RelayDag, LayeredNetwork, TwoHopMac>;

// Parses a network spec document (schema in README). Throws ParseError on
// syntax problems and ValidationError on invariant violations. `binding`
// substitutes the named sweep parameter into gain expressions.
Network parse_network(std::string_view text,
                      std::optional<std::pair<std::string, double>> binding = std::nullopt);
Network parse_network_file(const std::string& path,
                           std::optional<std::pair<std::string, double>> binding = std::nullopt);
std::string render_network(const Network& net);

// Relabels an acyclic network into layers; rejects inputs where some node
// sits at two different depths (message carries the witness node).
LayeredNetwork as_layered(const RelayDag& net);
LayeredNetwork as_layered(const LayeredNetwork& net);  // identity

}  // namespace anc

#endif
