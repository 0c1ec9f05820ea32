#include "depforge/oracle.hpp"

#include "depforge/error.hpp"

namespace depforge {

namespace {

// Gold arc between b and any token k < s, in either direction.
bool links_left_of(const ArcSet& gold, int s, int b) {
  for (int k = 0; k < s; ++k) {
    if (gold.connects(k, b)) return true;
  }
  return false;
}

bool all_dependents_attached(const ArcSet& gold, const ArcSet& current, int head) {
  for (int d : gold.dependents(head)) {
    if (!current.has_head(d)) return false;
  }
  return true;
}

}  // namespace

Transition arc_eager_oracle(const Configuration& config, const ArcSet& gold) {
  const auto b = config.buffer_front();
  if (!b) throw Error(Errc::EmptyBuffer, "oracle called on a terminal configuration");
  const auto s = config.stack_top();
  if (!s) return Transition::shift();

  if (gold.head(*s) == *b) return Transition::left_arc(*gold.relation(*s));
  if (gold.head(*b) == *s) return Transition::right_arc(*gold.relation(*b));
  if (config.arcs.has_head(*s) && links_left_of(gold, *s, *b)) return Transition::reduce();
  return Transition::shift();
}

Transition baseline_oracle(const Configuration& config, const ArcSet& gold) {
  const auto b = config.buffer_front();
  if (!b) throw Error(Errc::EmptyBuffer, "oracle called on a terminal configuration");
  const auto s = config.stack_top();
  if (!s) return Transition::shift();

  if (*s != kRoot && gold.head(*s) == *b) return Transition::left_arc(*gold.relation(*s));
  if (*b != kRoot && gold.head(*b) == *s && all_dependents_attached(gold, config.arcs, *b)) {
    return Transition::right_arc(*gold.relation(*b));
  }
  return Transition::shift();
}

Transition oracle_transition(SystemKind system, const Configuration& config, const ArcSet& gold) {
  return system == SystemKind::ArcEager ? arc_eager_oracle(config, gold)
                                        : baseline_oracle(config, gold);
}

std::vector<OracleStep> derive(const Sentence& sentence, SystemKind system) {
  const auto heads = heads_of(sentence);
  if (!is_projective(std::span<const int>(heads))) {
    throw Error(Errc::NonProjectiveGold, "gold tree is not projective");
  }
  const ArcSet gold = gold_arcs(sentence);
  const auto& ts = system_for(system);

  std::vector<OracleStep> steps;
  Configuration config = ts.initial(sentence);
  const std::size_t limit = 2 * sentence.size() + 2;
  while (!ts.is_terminal(config)) {
    auto t = oracle_transition(system, config, gold);
    if (!ts.legal(config, t)) {
      throw Error(Errc::IllegalTransition, "oracle proposed illegal " + t.label());
    }
    Configuration next = ts.apply(config, t);
    steps.push_back({std::move(config), std::move(t)});
    config = std::move(next);
    if (steps.size() > limit) {
      throw Error(Errc::InvariantViolation, "oracle derivation exceeded 2n+2 steps");
    }
  }
  return steps;
}

}  // namespace depforge
