// Copyright 2026 The VKS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

namespace vks {

/// Dinic max-flow / min-cut on a directed graph with double capacities.
/// Edges are stored in pairs so edge e and e^1 are mutual reverses; residual
/// capacities below a small epsilon count as saturated.
class MaxFlow {
 public:
  explicit MaxFlow(int node_count)
      : head_(node_count, -1),
        level_(node_count, -1),
        iter_(node_count, -1) {
    if (node_count <= 0)
      throw std::invalid_argument("MaxFlow: node count must be positive");
  }

  int node_count() const { return static_cast<int>(head_.size()); }

  void add_edge(int from, int to, double capacity,
                double reverse_capacity = 0.0) {
    if (from < 0 || from >= node_count() || to < 0 || to >= node_count())
      throw std::invalid_argument("MaxFlow: node out of range");
    if (capacity < 0.0 || reverse_capacity < 0.0)
      throw std::invalid_argument("MaxFlow: negative capacity");
    edges_.push_back({to, head_[from], capacity});
    head_[from] = static_cast<int>(edges_.size()) - 1;
    edges_.push_back({from, head_[to], reverse_capacity});
    head_[to] = static_cast<int>(edges_.size()) - 1;
  }

  double solve(int source, int sink) {
    if (source == sink) throw std::invalid_argument("MaxFlow: source == sink");
    double flow = 0.0;
    while (bfs_levels(source, sink)) {
      iter_ = head_;
      flow += blocking_flow(source, sink);
    }
    return flow;
  }

  /// After solve(): true when the node lies on the source side of the
  /// min-cut (still reachable in the residual graph).
  bool source_side(int node) const { return level_[node] >= 0; }

 private:
  struct Edge {
    int to;
    int next;
    double cap;
  };

  static constexpr double kEps = 1e-12;

  bool bfs_levels(int source, int sink) {
    std::fill(level_.begin(), level_.end(), -1);
    queue_.clear();
    queue_.push_back(source);
    level_[source] = 0;
    for (size_t qi = 0; qi < queue_.size(); ++qi) {
      int node = queue_[qi];
      for (int e = head_[node]; e != -1; e = edges_[e].next) {
        if (edges_[e].cap > kEps && level_[edges_[e].to] < 0) {
          level_[edges_[e].to] = level_[node] + 1;
          queue_.push_back(edges_[e].to);
        }
      }
    }
    return level_[sink] >= 0;
  }

  double blocking_flow(int source, int sink) {
    double total = 0.0;
    path_.clear();
    int node = source;
    while (true) {
      if (node == sink) {
        double bottleneck = std::numeric_limits<double>::infinity();
        for (int e : path_)
          bottleneck = std::min(bottleneck, edges_[e].cap);
        for (int e : path_) {
          edges_[e].cap -= bottleneck;
          edges_[e ^ 1].cap += bottleneck;
        }
        total += bottleneck;
        size_t keep = 0;
        while (keep < path_.size() && edges_[path_[keep]].cap > kEps) ++keep;
        path_.resize(keep);
        node = keep == 0 ? source : edges_[path_[keep - 1]].to;
        continue;
      }
      int e = iter_[node];
      while (e != -1 && !(edges_[e].cap > kEps &&
                          level_[edges_[e].to] == level_[node] + 1))
        e = edges_[e].next;
      iter_[node] = e;
      if (e == -1) {
        if (node == source) break;
        level_[node] = -1;  // dead end for this phase
        int back = path_.back();
        path_.pop_back();
        node = edges_[back ^ 1].to;
      } else {
        path_.push_back(e);
        node = edges_[e].to;
      }
    }
    return total;
  }

  std::vector<Edge> edges_;
  std::vector<int> head_;
  std::vector<int> level_;
  std::vector<int> iter_;
  std::vector<int> queue_;
  std::vector<int> path_;
};

}  // namespace vks
