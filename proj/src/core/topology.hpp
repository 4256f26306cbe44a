#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace qsw {

// Link state: bit j set means client j holds a fresh LLE this slot.
using StateMask = uint32_t;

// A matching stored as its sorted request-type indices. The dense served
// vector y is implied: y[e] = 1 iff e appears in the list.
using EdgeList = std::vector<uint16_t>;

// Star switch with N clients; one request type per unordered client pair,
// indexed lexicographically: (0,1), (0,2), ..., (N-2,N-1).
class Topology {
 public:
  // Combinatorial ceiling: matching enumeration is exhaustive and memoized,
  // fine up to K12 (140k matchings) but not beyond.
  static constexpr int kMaxClients = 12;

  explicit Topology(int nClients);

  int clients() const { return n_; }
  int requestTypes() const { return d_; }

  std::pair<int, int> pairOf(int type) const;
  int indexOf(int i, int j) const;

  // A*y: LLEs consumed per client when serving the matching y.
  std::vector<int> lleCost(const EdgeList& y) const;

  // Dense 0/1 served vector of length d.
  std::vector<uint8_t> served(const EdgeList& y) const;

  bool isMatching(const EdgeList& y) const;

  StateMask fullState() const { return (StateMask(1) << n_) - 1; }

 private:
  int n_;
  int d_;
  std::vector<std::pair<uint8_t, uint8_t>> pairs_;
  std::vector<int16_t> index_;  // n_*n_ lookup table, -1 on the diagonal
};

}  // namespace qsw
