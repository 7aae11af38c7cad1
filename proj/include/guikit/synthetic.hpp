#pragma once

#include <cstdint>
#include <vector>

#include "guikit/episodes.hpp"

namespace guikit {

enum class StepMix { Mixed, ClickOnly, ScrollOnly };

struct SyntheticSpec {
  std::size_t episodes = 10;
  std::size_t min_steps = 1;
  std::size_t max_steps = 12;
  StepMix mix = StepMix::Mixed;
  Subset subset = Subset::General;
  std::uint64_t seed = 0;
};

/// Random but valid episodes with raw (unnormalized) gold gestures. Mixed
/// episodes end in status_complete. Ids are "<subset>-<index>" zero padded.
std::vector<Episode> synthetic_episodes(const SyntheticSpec& spec);

/// A random action of the given type that passes validate(); gestures are raw.
Action random_action(ActionType type, std::uint64_t seed);

}  // namespace guikit
