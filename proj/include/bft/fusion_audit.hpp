#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bft/butterfly.hpp"

namespace bft {

// A layered DAG describing any channel-fusion design: layers[i] nodes at
// depth i, edges connecting consecutive layers only. Layer 0 is the
// inputs, the last layer the outputs.
struct FusionGraph {
  std::vector<int> layers;
  // edges[i] holds (from, to) pairs between layer i and layer i+1.
  std::vector<std::vector<std::pair<int, int>>> edges;

  int gap_count() const { return static_cast<int>(edges.size()); }
  int64_t edge_count() const;
  void validate() const;
};

// The butterfly graph of a spec: m+1 layers of n nodes; node u at depth
// l connects to its radix partners at depth l+1.
FusionGraph export_graph(const ButterflySpec& spec);

std::string fusion_graph_to_json(const FusionGraph& g);
FusionGraph fusion_graph_from_json(const std::string& text);

// Input-to-output path counts via layer-by-layer integer matrix
// products. Butterfly graphs have every count equal to 1.
struct PathCounts {
  int inputs = 0;
  int outputs = 0;
  std::vector<int64_t> counts;  // counts[v * inputs + u] for u -> v

  int64_t at(int input, int output) const {
    return counts[static_cast<size_t>(output) * inputs + input];
  }
  bool all_reachable() const;
  bool all_unique() const;
};

PathCounts check_full_connectivity(const FusionGraph& g);

// Minimum number of nodes whose removal disconnects every input from
// every output: a min vertex cut, computed by node-splitting max-flow
// with unit capacity on every node. Removing the whole input layer
// always works, so the result is at most n. Returns 0 when the graph is
// already disconnected.
int bottleneck_size(const FusionGraph& g);

// True at position i iff all nodes of layer i share one out-degree.
std::vector<bool> check_symmetry(const FusionGraph& g);

// The four fusion design principles on one concrete graph, plus edge and
// bottleneck accounting against the n*log2(n) edge lower bound.
struct AuditReport {
  bool full_connectivity = false;
  bool bottleneck_ok = false;   // bottleneck >= n
  bool low_op_count = false;    // edges <= kLowOpFactor * n * log2(n)
  bool symmetric = false;
  int64_t edge_count = 0;
  int bottleneck = 0;
  double bound_ratio = 0.0;     // edges / (n * log2(n))
  bool claim_witnessed = false; // edges >= n * log2(n)

  bool all_passed() const {
    return full_connectivity && bottleneck_ok && low_op_count && symmetric;
  }
};

// "Low operation count" on a single instance: within this factor of the
// n*log2(n) lower bound. Radix-k butterflies have ratio k/log2(k), so
// the factor admits radices up to 16 while a dense 64x64 layer (ratio
// 10.67) fails.
inline constexpr double kLowOpFactor = 4.0;

AuditReport audit(const FusionGraph& g);

std::string format_report(const AuditReport& r);

}  // namespace bft
