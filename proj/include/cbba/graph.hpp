// Copyright 2026 The CBBA-PR Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CBBA_GRAPH_HPP
#define CBBA_GRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <queue>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cbba/core.hpp"

namespace cbba {

/// Undirected, unweighted communication graph over agents 0..n-1.
class CommGraph {
 public:
  CommGraph() = default;
  explicit CommGraph(std::size_t n) : adjacency_(n) {}

  std::size_t size() const { return adjacency_.size(); }

  void connect(std::size_t a, std::size_t b) {
    if (a == b) throw InputError("communication graph: self-loop on agent " + std::to_string(a));
    if (a >= size() || b >= size()) throw InputError("communication graph: agent index out of range");
    if (adjacent(a, b)) return;
    insert_sorted(adjacency_[a], b);
    insert_sorted(adjacency_[b], a);
  }

  bool adjacent(std::size_t a, std::size_t b) const {
    return std::binary_search(adjacency_[a].begin(), adjacency_[a].end(), b);
  }

  /// Neighbours in ascending id order.
  const std::vector<std::size_t>& neighbors(std::size_t a) const { return adjacency_[a]; }

  std::size_t edge_count() const {
    std::size_t twice = 0;
    for (const auto& adj : adjacency_) twice += adj.size();
    return twice / 2;
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < size(); ++a) {
      for (std::size_t b : adjacency_[a]) {
        if (a < b) out.emplace_back(a, b);
      }
    }
    return out;
  }

  /// Hop distances from `source`; -1 marks unreachable nodes.
  std::vector<int> hops_from(std::size_t source) const {
    std::vector<int> dist(size(), -1);
    std::queue<std::size_t> frontier;
    dist[source] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
      const std::size_t u = frontier.front();
      frontier.pop();
      for (std::size_t v : adjacency_[u]) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          frontier.push(v);
        }
      }
    }
    return dist;
  }

  bool connected() const {
    if (size() == 0) return true;
    const auto d = hops_from(0);
    return std::none_of(d.begin(), d.end(), [](int h) { return h < 0; });
  }

  /// Subgraph induced by `nodes`, relabelled 0..nodes.size()-1 in the given order.
  CommGraph induced(const std::vector<std::size_t>& nodes) const {
    CommGraph sub(nodes.size());
    for (std::size_t a = 0; a < nodes.size(); ++a) {
      for (std::size_t b = a + 1; b < nodes.size(); ++b) {
        if (adjacent(nodes[a], nodes[b])) sub.connect(a, b);
      }
    }
    return sub;
  }

  friend bool operator==(const CommGraph&, const CommGraph&) = default;

 private:
  static void insert_sorted(std::vector<std::size_t>& v, std::size_t x) {
    v.insert(std::upper_bound(v.begin(), v.end(), x), x);
  }

  std::vector<std::vector<std::size_t>> adjacency_;
};

/// Longest shortest path in hops, by BFS from every node.
inline int diameter(const CommGraph& graph) {
  int best = 0;
  for (std::size_t s = 0; s < graph.size(); ++s) {
    for (int h : graph.hops_from(s)) {
      if (h < 0) throw InputError("diameter: communication graph is disconnected");
      best = std::max(best, h);
    }
  }
  return best;
}

enum class TopologyKind { kComplete, kLine, kRing, kRandomGeometric };

inline std::string to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::kComplete: return "complete";
    case TopologyKind::kLine: return "line";
    case TopologyKind::kRing: return "ring";
    case TopologyKind::kRandomGeometric: return "random-geometric";
  }
  return "complete";
}

inline TopologyKind topology_from_string(const std::string& s) {
  if (s == "complete") return TopologyKind::kComplete;
  if (s == "line") return TopologyKind::kLine;
  if (s == "ring") return TopologyKind::kRing;
  if (s == "random-geometric") return TopologyKind::kRandomGeometric;
  throw InputError("unknown topology kind '" + s + "'");
}

/// Uniform double in [0, 1) from the top 53 bits; identical on every
/// standard library, unlike std::uniform_real_distribution.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline constexpr int kGeometricRetries = 1000;

/// Random-geometric graphs place agents uniformly in the unit square and link
/// pairs within `radius`; disconnected draws are rejected.
inline CommGraph make_topology(TopologyKind kind, std::size_t n, std::uint64_t seed = 0, double radius = 0.5) {
  if (n < 1) throw InputError("make_topology: need at least one agent");
  CommGraph g(n);
  switch (kind) {
    case TopologyKind::kComplete:
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) g.connect(a, b);
      return g;
    case TopologyKind::kLine:
      for (std::size_t a = 0; a + 1 < n; ++a) g.connect(a, a + 1);
      return g;
    case TopologyKind::kRing:
      for (std::size_t a = 0; a + 1 < n; ++a) g.connect(a, a + 1);
      if (n > 2) g.connect(n - 1, 0);
      return g;
    case TopologyKind::kRandomGeometric: {
      std::mt19937_64 rng(seed);
      for (int attempt = 0; attempt < kGeometricRetries; ++attempt) {
        std::vector<Vec2> pts(n);
        for (auto& p : pts) {
          p.x = unit_uniform(rng);
          p.y = unit_uniform(rng);
        }
        CommGraph candidate(n);
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = a + 1; b < n; ++b)
            if (distance(pts[a], pts[b]) <= radius) candidate.connect(a, b);
        if (candidate.connected()) return candidate;
      }
      throw InputError("make_topology: no connected random-geometric graph after " +
                       std::to_string(kGeometricRetries) + " draws (radius too small?)");
    }
  }
  return g;
}

}  // namespace cbba

#endif  // CBBA_GRAPH_HPP
