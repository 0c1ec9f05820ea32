#pragma once

#include <vector>

#include "depforge/conllx.hpp"
#include "depforge/transition.hpp"

namespace depforge {

struct OracleStep {
  Configuration configuration;
  Transition transition;
};

/// Static arc-eager oracle. With stack top s and buffer front b:
/// LEFT-ARC(r) if (b, r, s) is gold, RIGHT-ARC(r) if (s, r, b) is gold,
/// REDUCE if s is attached and some token left of s has a gold arc with b,
/// SHIFT otherwise. `gold` must be projective; callers check up front.
/// Throws Errc::EmptyBuffer on terminal configurations.
Transition arc_eager_oracle(const Configuration& config, const ArcSet& gold);

/// Static oracle for the three-operation baseline system. RIGHT-ARC waits
/// until every gold dependent of b has been attached.
Transition baseline_oracle(const Configuration& config, const ArcSet& gold);

Transition oracle_transition(SystemKind system, const Configuration& config, const ArcSet& gold);

/// Runs the oracle from the initial to a terminal configuration. Throws
/// Errc::NonProjectiveGold (gold not projective) or Errc::MissingHead.
std::vector<OracleStep> derive(const Sentence& sentence, SystemKind system);

}  // namespace depforge
