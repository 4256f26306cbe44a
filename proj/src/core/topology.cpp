#include "topology.hpp"

#include <stdexcept>
#include <string>

#include "common.hpp"

namespace qsw {

Topology::Topology(int nClients) : n_(nClients) {
  if (n_ < 2) {
    throw std::invalid_argument("topology: need at least 2 clients, got " +
                                std::to_string(n_));
  }
  if (n_ > kMaxClients) {
    throw TooLargeError("topology: " + std::to_string(n_) +
                        " clients exceeds the supported maximum of " +
                        std::to_string(kMaxClients));
  }
  d_ = n_ * (n_ - 1) / 2;
  pairs_.reserve(d_);
  index_.assign(size_t(n_) * n_, int16_t(-1));
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      index_[size_t(i) * n_ + j] = int16_t(pairs_.size());
      index_[size_t(j) * n_ + i] = int16_t(pairs_.size());
      pairs_.emplace_back(uint8_t(i), uint8_t(j));
    }
  }
}

std::pair<int, int> Topology::pairOf(int type) const {
  if (type < 0 || type >= d_) throw std::out_of_range("topology: bad request type");
  return {pairs_[type].first, pairs_[type].second};
}

int Topology::indexOf(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || i == j) {
    throw std::out_of_range("topology: bad client pair");
  }
  return index_[size_t(i) * n_ + j];
}

std::vector<int> Topology::lleCost(const EdgeList& y) const {
  std::vector<int> cost(n_, 0);
  for (uint16_t e : y) {
    auto [i, j] = pairOf(e);
    ++cost[i];
    ++cost[j];
  }
  return cost;
}

std::vector<uint8_t> Topology::served(const EdgeList& y) const {
  std::vector<uint8_t> out(d_, 0);
  for (uint16_t e : y) {
    if (e >= d_) throw std::out_of_range("topology: bad request type in matching");
    out[e] = 1;
  }
  return out;
}

bool Topology::isMatching(const EdgeList& y) const {
  uint32_t used = 0;
  for (uint16_t e : y) {
    if (e >= d_) return false;
    auto [i, j] = pairOf(e);
    uint32_t mask = (1u << i) | (1u << j);
    if (used & mask) return false;
    used |= mask;
  }
  return true;
}

}  // namespace qsw
