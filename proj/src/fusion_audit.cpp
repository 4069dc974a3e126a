#include "bft/fusion_audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace bft {

int64_t FusionGraph::edge_count() const {
  int64_t total = 0;
  for (const auto& layer : edges) total += static_cast<int64_t>(layer.size());
  return total;
}

void FusionGraph::validate() const {
  if (layers.empty()) {
    throw std::invalid_argument("FusionGraph: no layers");
  }
  for (int n : layers) {
    if (n < 1) throw std::invalid_argument("FusionGraph: empty layer");
  }
  if (edges.size() + 1 != layers.size()) {
    throw std::invalid_argument(
        "FusionGraph: " + std::to_string(layers.size()) + " layers need " +
        std::to_string(layers.size() - 1) + " edge lists, got " +
        std::to_string(edges.size()));
  }
  for (size_t i = 0; i < edges.size(); ++i) {
    for (auto [from, to] : edges[i]) {
      if (from < 0 || from >= layers[i] || to < 0 || to >= layers[i + 1]) {
        throw std::invalid_argument("FusionGraph: edge (" +
                                    std::to_string(from) + "," +
                                    std::to_string(to) + ") out of range at gap " +
                                    std::to_string(i));
      }
    }
  }
}

FusionGraph export_graph(const ButterflySpec& spec) {
  FusionGraph g;
  int m = spec.layer_count();
  g.layers.assign(m + 1, spec.n);
  if (m == 0) g.layers.assign(1, spec.n);
  g.edges.resize(m);
  for (int l = 0; l < m; ++l) {
    LayerGeometry geo = layer_geometry(spec, l);
    g.edges[l].reserve(static_cast<size_t>(spec.n) * geo.radix);
    for (int u = 0; u < spec.n; ++u) {
      for (int j = 0; j < geo.radix; ++j) {
        g.edges[l].emplace_back(partner_node(geo, u, j), u);
      }
    }
  }
  return g;
}

std::string fusion_graph_to_json(const FusionGraph& g) {
  nlohmann::json j;
  j["layers"] = g.layers;
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& gap : g.edges) {
    nlohmann::json pairs = nlohmann::json::array();
    for (auto [from, to] : gap) {
      pairs.push_back({from, to});
    }
    layers.push_back(std::move(pairs));
  }
  j["edges"] = std::move(layers);
  return j.dump(2);
}

FusionGraph fusion_graph_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  FusionGraph g;
  g.layers = j.at("layers").get<std::vector<int>>();
  for (const auto& gap : j.at("edges")) {
    std::vector<std::pair<int, int>> pairs;
    for (const auto& e : gap) {
      pairs.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    }
    g.edges.push_back(std::move(pairs));
  }
  g.validate();
  return g;
}

bool PathCounts::all_reachable() const {
  return std::all_of(counts.begin(), counts.end(),
                     [](int64_t c) { return c >= 1; });
}

bool PathCounts::all_unique() const {
  return std::all_of(counts.begin(), counts.end(),
                     [](int64_t c) { return c == 1; });
}

PathCounts check_full_connectivity(const FusionGraph& g) {
  g.validate();
  int inputs = g.layers.front();
  // counts[v][u] after gap i: paths from input u to node v of layer i+1.
  std::vector<int64_t> cur(static_cast<size_t>(inputs) * inputs, 0);
  for (int u = 0; u < inputs; ++u) cur[static_cast<size_t>(u) * inputs + u] = 1;
  int cur_nodes = inputs;
  for (int gap = 0; gap < g.gap_count(); ++gap) {
    int next_nodes = g.layers[gap + 1];
    std::vector<int64_t> next(static_cast<size_t>(next_nodes) * inputs, 0);
    for (auto [from, to] : g.edges[gap]) {
      for (int u = 0; u < inputs; ++u) {
        next[static_cast<size_t>(to) * inputs + u] +=
            cur[static_cast<size_t>(from) * inputs + u];
      }
    }
    cur = std::move(next);
    cur_nodes = next_nodes;
  }
  PathCounts pc;
  pc.inputs = inputs;
  pc.outputs = cur_nodes;
  pc.counts = std::move(cur);
  return pc;
}

namespace {

// Dinic max-flow on the node-split graph; capacities are small ints.
class MaxFlow {
 public:
  explicit MaxFlow(int nodes) : adj_(nodes) {}

  void add_edge(int from, int to, int cap) {
    adj_[from].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({to, cap});
    adj_[to].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({from, 0});
  }

  int run(int source, int sink) {
    int total = 0;
    while (bfs(source, sink)) {
      ptr_.assign(adj_.size(), 0);
      while (int pushed = dfs(source, sink, std::numeric_limits<int>::max())) {
        total += pushed;
      }
    }
    return total;
  }

 private:
  struct Edge {
    int to;
    int cap;
  };

  bool bfs(int source, int sink) {
    level_.assign(adj_.size(), -1);
    std::queue<int> q;
    q.push(source);
    level_[source] = 0;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int id : adj_[v]) {
        const Edge& e = edges_[id];
        if (e.cap > 0 && level_[e.to] == -1) {
          level_[e.to] = level_[v] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[sink] != -1;
  }

  int dfs(int v, int sink, int flow) {
    if (v == sink) return flow;
    for (int& i = ptr_[v]; i < static_cast<int>(adj_[v].size()); ++i) {
      int id = adj_[v][i];
      Edge& e = edges_[id];
      if (e.cap <= 0 || level_[e.to] != level_[v] + 1) continue;
      int pushed = dfs(e.to, sink, std::min(flow, e.cap));
      if (pushed > 0) {
        e.cap -= pushed;
        edges_[id ^ 1].cap += pushed;
        return pushed;
      }
    }
    return 0;
  }

  std::vector<std::vector<int>> adj_;
  std::vector<Edge> edges_;
  std::vector<int> level_;
  std::vector<int> ptr_;
};

}  // namespace

int bottleneck_size(const FusionGraph& g) {
  g.validate();
  // Node ids per layer, each split into in/out halves.
  int total_nodes = 0;
  std::vector<int> layer_base(g.layers.size());
  for (size_t i = 0; i < g.layers.size(); ++i) {
    layer_base[i] = total_nodes;
    total_nodes += g.layers[i];
  }
  int source = 2 * total_nodes;
  int sink = source + 1;
  // A cut never needs more than every node; edge capacities above that
  // are effectively infinite.
  int inf = total_nodes + 1;
  MaxFlow flow(2 * total_nodes + 2);
  for (int v = 0; v < total_nodes; ++v) {
    flow.add_edge(2 * v, 2 * v + 1, 1);
  }
  for (int u = 0; u < g.layers.front(); ++u) {
    flow.add_edge(source, 2 * (layer_base[0] + u), inf);
  }
  for (int v = 0; v < g.layers.back(); ++v) {
    flow.add_edge(2 * (layer_base.back() + v) + 1, sink, inf);
  }
  for (int gap = 0; gap < g.gap_count(); ++gap) {
    for (auto [from, to] : g.edges[gap]) {
      flow.add_edge(2 * (layer_base[gap] + from) + 1,
                    2 * (layer_base[gap + 1] + to), inf);
    }
  }
  return flow.run(source, sink);
}

std::vector<bool> check_symmetry(const FusionGraph& g) {
  g.validate();
  std::vector<bool> symmetric(g.gap_count(), true);
  for (int gap = 0; gap < g.gap_count(); ++gap) {
    std::vector<int> degree(g.layers[gap], 0);
    for (auto [from, to] : g.edges[gap]) {
      (void)to;
      ++degree[from];
    }
    symmetric[gap] =
        std::all_of(degree.begin(), degree.end(),
                    [&](int d) { return d == degree[0]; });
  }
  return symmetric;
}

AuditReport audit(const FusionGraph& g) {
  g.validate();
  AuditReport r;
  PathCounts pc = check_full_connectivity(g);
  r.full_connectivity = pc.all_reachable();
  r.bottleneck = bottleneck_size(g);
  int n = g.layers.front();
  r.bottleneck_ok = r.bottleneck >= n;
  r.edge_count = g.edge_count();
  double bound = n >= 2 ? n * std::log2(static_cast<double>(n)) : 0.0;
  r.bound_ratio = bound > 0.0 ? static_cast<double>(r.edge_count) / bound : 0.0;
  r.low_op_count =
      bound <= 0.0 || static_cast<double>(r.edge_count) <= kLowOpFactor * bound;
  auto symmetric = check_symmetry(g);
  r.symmetric =
      std::all_of(symmetric.begin(), symmetric.end(), [](bool b) { return b; });
  r.claim_witnessed = static_cast<double>(r.edge_count) >= bound;
  return r;
}

std::string format_report(const AuditReport& r) {
  std::ostringstream out;
  auto mark = [](bool b) { return b ? "pass" : "FAIL"; };
  out << "principle 1 full connectivity   " << mark(r.full_connectivity) << "\n"
      << "principle 2 bottleneck >= n     " << mark(r.bottleneck_ok)
      << "  (cut " << r.bottleneck << ")\n"
      << "principle 3 low operation count " << mark(r.low_op_count)
      << "  (ratio " << r.bound_ratio << " of n log2 n)\n"
      << "principle 4 out-degree symmetry " << mark(r.symmetric) << "\n"
      << "edges " << r.edge_count << ", n log2 n bound "
      << (r.claim_witnessed ? "holds" : "VIOLATED") << "\n";
  return out.str();
}

}  // namespace bft
