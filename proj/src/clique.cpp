#include "suprec/clique.hpp"

#include <algorithm>

#include "suprec/error.hpp"

namespace suprec {

BitGraph::BitGraph(std::size_t n)
    : n_(n), words_((n + 63) / 64), rows_(n * words_, 0) {}

void BitGraph::connect(std::size_t i, std::size_t j) {
  if (i >= n_ || j >= n_) throw DomainError("BitGraph: vertex out of range");
  if (i == j) return;
  rows_[i * words_ + j / 64] |= std::uint64_t{1} << (j % 64);
  rows_[j * words_ + i / 64] |= std::uint64_t{1} << (i % 64);
}

namespace {

class CliqueSearch {
 public:
  CliqueSearch(const BitGraph& graph, std::size_t k) : graph_(graph), k_(k) {}

  bool run(std::vector<std::size_t> candidates) { return expand(candidates); }
  const std::vector<std::size_t>& clique() const { return clique_; }

 private:
  // Greedy sequential coloring of `candidates` (in their given order).
  // Returns vertices grouped by color class with each vertex's color.
  void color(const std::vector<std::size_t>& candidates,
             std::vector<std::size_t>& order, std::vector<std::size_t>& colors) {
    std::vector<std::vector<std::size_t>> classes;
    for (std::size_t v : candidates) {
      auto it = std::find_if(classes.begin(), classes.end(), [&](const auto& cls) {
        return std::none_of(cls.begin(), cls.end(),
                            [&](std::size_t u) { return graph_.adjacent(u, v); });
      });
      if (it == classes.end()) {
        classes.emplace_back();
        it = std::prev(classes.end());
      }
      it->push_back(v);
    }
    order.clear();
    colors.clear();
    for (std::size_t c = 0; c < classes.size(); ++c) {
      for (std::size_t v : classes[c]) {
        order.push_back(v);
        colors.push_back(c + 1);
      }
    }
  }

  // `candidates` are all adjacent to every vertex of clique_, listed in
  // descending vertex order.
  bool expand(const std::vector<std::size_t>& candidates) {
    if (clique_.size() == k_) return true;
    std::vector<std::size_t> order, colors;
    color(candidates, order, colors);
    std::vector<bool> removed(graph_.size(), false);
    for (std::size_t pos = order.size(); pos-- > 0;) {
      if (clique_.size() + colors[pos] < k_) return false;
      const std::size_t v = order[pos];
      std::vector<std::size_t> next;
      for (std::size_t u : candidates) {
        if (u != v && !removed[u] && graph_.adjacent(u, v)) next.push_back(u);
      }
      clique_.push_back(v);
      if (clique_.size() + next.size() >= k_ && expand(next)) return true;
      clique_.pop_back();
      removed[v] = true;
    }
    return false;
  }

  const BitGraph& graph_;
  std::size_t k_;
  std::vector<std::size_t> clique_;
};

}  // namespace

std::optional<std::vector<std::size_t>> find_clique(const BitGraph& graph,
                                                    std::size_t k) {
  if (k == 0) return std::vector<std::size_t>{};
  if (k > graph.size()) return std::nullopt;
  std::vector<std::size_t> candidates(graph.size());
  for (std::size_t i = 0; i < graph.size(); ++i) {
    candidates[i] = graph.size() - 1 - i;
  }
  CliqueSearch search(graph, k);
  if (!search.run(std::move(candidates))) return std::nullopt;
  auto result = search.clique();
  std::sort(result.begin(), result.end());
  return result;
}

}  // namespace suprec
