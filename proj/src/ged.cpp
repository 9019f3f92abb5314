#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "qdt/error.hpp"
#include "qdt/metrics.hpp"

namespace qdt {

namespace {

struct CompactGraph {
  std::vector<int> labels;               // interned label ids
  std::vector<std::uint64_t> out;        // adjacency bitmasks
  std::vector<std::uint64_t> in;         // reverse adjacency
  std::vector<std::pair<int, int>> edges;

  std::size_t size() const { return labels.size(); }
};

CompactGraph compact(const LabeledGraph& graph,
                     std::unordered_map<std::string, int>& intern) {
  CompactGraph cg;
  cg.labels.reserve(graph.labels.size());
  for (const std::string& label : graph.labels) {
    auto [it, inserted] = intern.emplace(label, static_cast<int>(intern.size()));
    cg.labels.push_back(it->second);
  }
  cg.out.assign(graph.labels.size(), 0);
  cg.in.assign(graph.labels.size(), 0);
  for (const auto& [from, to] : graph.edges) {
    cg.out[static_cast<std::size_t>(from)] |= std::uint64_t{1} << to;
    cg.in[static_cast<std::size_t>(to)] |= std::uint64_t{1} << from;
    cg.edges.emplace_back(from, to);
  }
  return cg;
}

// Exact minimum-cost node mapping by depth-first branch and bound.
// Nodes of the first graph are fixed in index order; each is mapped to an
// unused node of the second graph or deleted. Children are explored
// cheapest-bound first, and a branch is cut only when its admissible
// lower bound cannot beat the incumbent, so the optimum is never lost.
class GedSearch {
 public:
  GedSearch(const CompactGraph& g1, const CompactGraph& g2, const GedCosts& costs)
      : g1_(g1), g2_(g2), costs_(costs), n1_(g1.size()), n2_(g2.size()) {
    assign_.assign(n1_, -1);
    // Label tallies for the substitution bound, updated incrementally.
    for (int label : g1_.labels) ++remaining1_[label];
    for (int label : g2_.labels) ++remaining2_[label];
  }

  double run() {
    best_ = std::numeric_limits<double>::infinity();
    dfs(0, 0, 0.0);
    return best_;
  }

 private:
  void dfs(std::size_t k, std::uint64_t used, double g) {
    if (k == n1_) {
      best_ = std::min(best_, g + completion_cost(used));
      return;
    }
    if (g + lower_bound(k, used) >= best_) return;

    struct Child {
      int target;  // -1 deletes the node
      double delta;
    };
    std::vector<Child> children;
    children.reserve(n2_ + 1);
    for (std::size_t t = 0; t < n2_; ++t) {
      if (used >> t & 1) continue;
      double delta =
          (g1_.labels[k] == g2_.labels[t] ? 0.0 : costs_.node_substitute) +
          edge_delta(k, static_cast<int>(t), used);
      children.push_back(Child{static_cast<int>(t), delta});
    }
    children.push_back(Child{-1, costs_.node_delete + edge_delta(k, -1, used)});
    std::stable_sort(children.begin(), children.end(),
                     [](const Child& a, const Child& b) {
                       return a.delta < b.delta;
                     });

    --remaining1_[g1_.labels[k]];
    for (const Child& child : children) {
      assign_[k] = child.target;
      if (child.target >= 0) {
        --remaining2_[g2_.labels[static_cast<std::size_t>(child.target)]];
        dfs(k + 1, used | (std::uint64_t{1} << child.target), g + child.delta);
        ++remaining2_[g2_.labels[static_cast<std::size_t>(child.target)]];
      } else {
        dfs(k + 1, used, g + child.delta);
      }
    }
    assign_[k] = -1;
    ++remaining1_[g1_.labels[k]];
  }

  // Edge cost of fixing node k against all previously fixed nodes.
  double edge_delta(std::size_t k, int target, std::uint64_t used) const {
    double cost = 0.0;
    for (std::size_t v = 0; v < k; ++v) {
      const int tv = assign_[v];
      const bool kv = g1_.out[k] >> v & 1;
      const bool vk = g1_.out[v] >> k & 1;
      if (target >= 0 && tv >= 0) {
        const bool image_kv = g2_.out[static_cast<std::size_t>(target)] >> tv & 1;
        const bool image_vk = g2_.out[static_cast<std::size_t>(tv)] >> target & 1;
        if (kv != image_kv) cost += kv ? costs_.edge_delete : costs_.edge_insert;
        if (vk != image_vk) cost += vk ? costs_.edge_delete : costs_.edge_insert;
      } else {
        if (kv) cost += costs_.edge_delete;
        if (vk) cost += costs_.edge_delete;
      }
    }
    (void)used;
    return cost;
  }

  // Inserting every unused node of the second graph plus every edge
  // touching one.
  double completion_cost(std::uint64_t used) const {
    double cost = 0.0;
    for (std::size_t j = 0; j < n2_; ++j) {
      if (!(used >> j & 1)) cost += costs_.node_insert;
    }
    for (const auto& [x, y] : g2_.edges) {
      if (!(used >> x & 1) || !(used >> y & 1)) cost += costs_.edge_insert;
    }
    return cost;
  }

  // Admissible remainder bound with three parts:
  //  - node count surplus and forced label substitutions (multiset
  //    relaxation over the remaining labels);
  //  - per-anchor edge pools: a remaining edge incident to an already
  //    fixed node can only map to an edge of the image anchored at the
  //    same node and direction, so per-anchor surpluses are forced;
  //  - the open-open pools (both endpoints remaining) matched against
  //    each other in bulk.
  double lower_bound(std::size_t k, std::uint64_t used) const {
    const std::size_t r1 = n1_ - k;
    const std::size_t r2 = n2_ - static_cast<std::size_t>(std::popcount(used));

    double cost = r1 > r2 ? static_cast<double>(r1 - r2) * costs_.node_delete
                          : static_cast<double>(r2 - r1) * costs_.node_insert;

    std::size_t surplus = 0;
    for (const auto& [label, count1] : remaining1_) {
      if (count1 <= 0) continue;
      auto it = remaining2_.find(label);
      int count2 = it == remaining2_.end() ? 0 : it->second;
      if (count1 > count2) surplus += static_cast<std::size_t>(count1 - count2);
    }
    std::size_t matchable = std::min(r1, r2);
    std::size_t label_matches = r1 - std::min(surplus, r1);
    if (matchable > label_matches) {
      cost += static_cast<double>(matchable - label_matches) *
              std::min(costs_.node_substitute,
                       costs_.node_delete + costs_.node_insert);
    }

    const std::uint64_t open1 =
        n1_ >= 64 ? ~std::uint64_t{0} << k : ((~std::uint64_t{0}) << k) &
                                                 ((std::uint64_t{1} << n1_) - 1);
    const std::uint64_t open2 =
        ~used & (n2_ >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n2_) - 1);

    auto surplus_cost = [&](std::size_t have, std::size_t want) {
      return have > want
                 ? static_cast<double>(have - want) * costs_.edge_delete
                 : static_cast<double>(want - have) * costs_.edge_insert;
    };

    // Anchored pools, per fixed node and direction.
    for (std::size_t u = 0; u < k; ++u) {
      std::size_t a_out =
          static_cast<std::size_t>(std::popcount(g1_.out[u] & open1));
      std::size_t a_in =
          static_cast<std::size_t>(std::popcount(g1_.in[u] & open1));
      if (assign_[u] >= 0) {
        auto t = static_cast<std::size_t>(assign_[u]);
        std::size_t b_out =
            static_cast<std::size_t>(std::popcount(g2_.out[t] & open2));
        std::size_t b_in =
            static_cast<std::size_t>(std::popcount(g2_.in[t] & open2));
        cost += surplus_cost(a_out, b_out) + surplus_cost(a_in, b_in);
      } else {
        cost += static_cast<double>(a_out + a_in) * costs_.edge_delete;
      }
    }

    // Open-open pools.
    std::size_t e1_open = 0;
    for (std::size_t x = k; x < n1_; ++x) {
      e1_open += static_cast<std::size_t>(std::popcount(g1_.out[x] & open1));
    }
    std::size_t e2_open = 0;
    for (std::size_t x = 0; x < n2_; ++x) {
      if (!(open2 >> x & 1)) continue;
      e2_open += static_cast<std::size_t>(std::popcount(g2_.out[x] & open2));
    }
    cost += surplus_cost(e1_open, e2_open);

    return cost;
  }

  const CompactGraph& g1_;
  const CompactGraph& g2_;
  const GedCosts& costs_;
  std::size_t n1_;
  std::size_t n2_;
  std::vector<int> assign_;
  std::unordered_map<int, int> remaining1_;
  std::unordered_map<int, int> remaining2_;
  double best_ = 0.0;
};

}  // namespace

GedResult graph_edit_distance(const LabeledGraph& a, const LabeledGraph& b,
                              const GedCosts& costs) {
  const std::size_t bound = std::min<std::size_t>(costs.node_limit, 64);
  if (a.node_count() > bound || b.node_count() > bound) {
    throw Error(Errc::size_limit,
                "graph exceeds the configured node bound of " +
                    std::to_string(bound));
  }

  std::unordered_map<std::string, int> intern;
  CompactGraph g1 = compact(a, intern);
  CompactGraph g2 = compact(b, intern);
  GedSearch search(g1, g2, costs);

  GedResult result;
  result.raw = search.run();
  std::size_t larger = std::max(a.node_count() + a.edge_count(),
                                b.node_count() + b.edge_count());
  result.normalized = larger > 0 ? result.raw / static_cast<double>(larger) : 0.0;
  return result;
}

GedResult graph_edit_distance(const QdtTree& pred, const QdtTree& gold,
                              const GedCosts& costs) {
  return graph_edit_distance(to_graph(pred), to_graph(gold), costs);
}

}  // namespace qdt
