#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace suprec {

/// Undirected graph with bitset adjacency rows.
class BitGraph {
 public:
  explicit BitGraph(std::size_t n);

  std::size_t size() const { return n_; }
  void connect(std::size_t i, std::size_t j);
  bool adjacent(std::size_t i, std::size_t j) const {
    return (rows_[i * words_ + j / 64] >> (j % 64)) & 1u;
  }

 private:
  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> rows_;
};

/// Exact branch-and-bound search for a clique of exactly k vertices, pruning
/// with greedy-coloring bounds. Returns the vertices sorted ascending, or
/// nothing if no k-clique exists. Lower-indexed vertices are tried first, so
/// in a complete graph the answer is {0, ..., k-1}.
std::optional<std::vector<std::size_t>> find_clique(const BitGraph& graph,
                                                    std::size_t k);

}  // namespace suprec
