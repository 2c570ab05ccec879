#ifndef ANC_DETAIL_DAG_EVAL_HPP
#define ANC_DETAIL_DAG_EVAL_HPP

#include <string>
#include <vector>

#include "anc/network.hpp"

namespace anc::detail {

// Flat-index evaluator for tight inner loops (grid search, coordinate
// ascent, Monte Carlo). Relay slots follow the lexicographic id order.
class DagEvaluator {
  public:
    explicit DagEvaluator(const RelayDag& net);

    int relay_count() const { return static_cast<int>(relay_ids_.size()); }
    const std::vector<std::string>& relay_ids() const { return relay_ids_; }
    const std::vector<double>& relay_caps() const { return relay_caps_; }

    // Signal power at the destination and per-relay propagated noise
    // powers for the given gain vector.
    struct Split {
        double signal = 0.0;
        std::vector<double> relay_noise;  // per relay slot
    };
    Split split(const Vec& beta) const;

    double snr(const Vec& beta) const;  // full destination SNR (unit dest noise)

    // Topology accessors used by the sampling loop.
    int node_count() const { return static_cast<int>(order_.size()); }
    int source_node() const { return source_; }
    int dest_node() const { return dest_; }
    const std::vector<int>& order() const { return order_; }
    // in-edges per node as (upstream node, gain)
    const std::vector<std::vector<std::pair<int, double>>>& in() const { return in_; }
    // relay slot per node or -1
    const std::vector<int>& slot() const { return slot_; }
    double source_power() const { return source_power_; }

  private:
    std::vector<std::string> relay_ids_;
    std::vector<double> relay_caps_;
    std::vector<int> order_;
    std::vector<std::vector<std::pair<int, double>>> in_;
    std::vector<std::vector<std::pair<int, double>>> out_;
    std::vector<int> slot_;
    int source_ = 0;
    int dest_ = 0;
    double source_power_ = 0.0;
};

}  // namespace anc::detail

#endif
