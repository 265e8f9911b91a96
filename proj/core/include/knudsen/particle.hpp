#pragma once

#include <cstdint>
#include <vector>

#include "knudsen/vec.hpp"

namespace knudsen {

struct Particle {
  Vec pos{};
  Vec vel{};
  std::uint32_t collision_count = 0;
};

using Ensemble = std::vector<Particle>;

}  // namespace knudsen
