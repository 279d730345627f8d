#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>

#include "poshs/env.hpp"

namespace poshs {

/// Packed (activity, temperature index, humidity index) lookup key.
using ObservationKey = std::uint32_t;

ObservationKey observation_key(const ThermalGrid& grid, const ThermalObservation& obs);
ThermalObservation observation_from_key(const ThermalGrid& grid, ObservationKey key);

/// Index of the largest entry; ties resolve to the lowest index.
template <std::size_t N>
std::size_t argmax(const std::array<double, N>& values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < N; ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

/// Sparse tabular action-value function. Unseen rows read as zero; rows are
/// kept in key order so iteration and serialisation are reproducible.
template <std::size_t N>
class QTable {
 public:
  using Row = std::array<double, N>;

  Row row(ObservationKey key) const {
    const auto it = rows_.find(key);
    return it == rows_.end() ? Row{} : it->second;
  }

  double value(ObservationKey key, std::size_t action) const { return row(key)[action]; }

  double& at(ObservationKey key, std::size_t action) {
    return rows_.try_emplace(key, Row{}).first->second[action];
  }

  double max_value(ObservationKey key) const {
    const Row r = row(key);
    return *std::max_element(r.begin(), r.end());
  }

  const std::map<ObservationKey, Row>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  void clear() { rows_.clear(); }

  friend bool operator==(const QTable&, const QTable&) = default;

 private:
  std::map<ObservationKey, Row> rows_;
};

}  // namespace poshs
