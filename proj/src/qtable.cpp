#include "poshs/qtable.hpp"

#include <stdexcept>

namespace poshs {

ObservationKey observation_key(const ThermalGrid& grid, const ThermalObservation& obs) {
  if (obs.activity < 0 || obs.activity >= kActivityCount) {
    throw std::out_of_range("observation activity out of range");
  }
  const auto ti = static_cast<std::uint32_t>(grid.temp_index(obs.temp));
  const auto hi = static_cast<std::uint32_t>(grid.hum_index(obs.humidity));
  if (ti > 0xFFFu || hi > 0xFFFu) throw std::out_of_range("grid too large for observation key");
  return (static_cast<std::uint32_t>(obs.activity) << 24) | (ti << 12) | hi;
}

ThermalObservation observation_from_key(const ThermalGrid& grid, ObservationKey key) {
  const int activity = static_cast<int>(key >> 24);
  const int ti = static_cast<int>((key >> 12) & 0xFFFu);
  const int hi = static_cast<int>(key & 0xFFFu);
  return ThermalObservation{activity, grid.temperature(ti), grid.humidity(hi)};
}

}  // namespace poshs
