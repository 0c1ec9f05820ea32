#include "depforge/transition.hpp"

#include <numeric>

#include "depforge/error.hpp"

namespace depforge {

namespace {

constexpr std::string_view kShift = "SHIFT";
constexpr std::string_view kReduce = "REDUCE";
constexpr std::string_view kLeftArc = "LEFT-ARC";
constexpr std::string_view kRightArc = "RIGHT-ARC";

[[noreturn]] void illegal(const Configuration& config, const Transition& t) {
  std::string where = "stack size " + std::to_string(config.stack.size()) + ", buffer size " +
                      std::to_string(config.buffer.size());
  throw Error(Errc::IllegalTransition, t.label() + " with " + where);
}

bool left_arc_possible(const Configuration& config) {
  const auto top = config.stack_top();
  return !config.buffer.empty() && top && *top != kRoot && !config.arcs.has_head(*top);
}

class ArcEagerSystem final : public TransitionSystem {
 public:
  SystemKind kind() const override { return SystemKind::ArcEager; }
  bool legal(const Configuration& config, const Transition& t) const override {
    return arc_eager_legal(config, t);
  }
  Configuration apply(const Configuration& config, const Transition& t) const override {
    return arc_eager_apply(config, t);
  }
  std::vector<Transition> all_transitions(std::span<const std::string> relations) const override {
    std::vector<Transition> out{Transition::shift(), Transition::reduce()};
    for (const auto& r : relations) out.push_back(Transition::left_arc(r));
    for (const auto& r : relations) out.push_back(Transition::right_arc(r));
    return out;
  }
};

class BaselineSystem final : public TransitionSystem {
 public:
  SystemKind kind() const override { return SystemKind::Baseline; }
  bool legal(const Configuration& config, const Transition& t) const override {
    return baseline_legal(config, t);
  }
  Configuration apply(const Configuration& config, const Transition& t) const override {
    return baseline_apply(config, t);
  }
  std::vector<Transition> all_transitions(std::span<const std::string> relations) const override {
    std::vector<Transition> out{Transition::shift()};
    for (const auto& r : relations) out.push_back(Transition::left_arc(r));
    for (const auto& r : relations) out.push_back(Transition::right_arc(r));
    return out;
  }
};

}  // namespace

std::string Transition::label() const {
  switch (kind) {
    case TransitionKind::Shift: return std::string(kShift);
    case TransitionKind::Reduce: return std::string(kReduce);
    case TransitionKind::LeftArc: return std::string(kLeftArc) + ":" + relation;
    case TransitionKind::RightArc: return std::string(kRightArc) + ":" + relation;
  }
  return {};
}

Transition Transition::from_label(std::string_view label) {
  if (label == kShift) return shift();
  if (label == kReduce) return reduce();
  const auto colon = label.find(':');
  if (colon != std::string_view::npos && colon + 1 < label.size()) {
    const auto head = label.substr(0, colon);
    std::string rel(label.substr(colon + 1));
    if (head == kLeftArc) return left_arc(std::move(rel));
    if (head == kRightArc) return right_arc(std::move(rel));
  }
  throw Error(Errc::IllegalTransition, "not a transition label: '" + std::string(label) + "'");
}

std::string_view system_name(SystemKind kind) {
  return kind == SystemKind::ArcEager ? "arc-eager" : "baseline";
}

SystemKind parse_system_name(std::string_view name) {
  if (name == "arc-eager") return SystemKind::ArcEager;
  if (name == "baseline") return SystemKind::Baseline;
  throw Error(Errc::BadModel, "unknown transition system '" + std::string(name) + "'");
}

const TransitionSystem& system_for(SystemKind kind) {
  static const ArcEagerSystem arc_eager;
  static const BaselineSystem baseline;
  if (kind == SystemKind::ArcEager) return arc_eager;
  return baseline;
}

Configuration TransitionSystem::initial(const Sentence& sentence) const {
  return initial(sentence.size());
}

Configuration TransitionSystem::initial(std::size_t sentence_len) const {
  if (sentence_len == 0) throw Error(Errc::EmptySentence, "cannot parse an empty sentence");
  Configuration config;
  config.stack = {kRoot};
  config.buffer.resize(sentence_len);
  std::iota(config.buffer.begin(), config.buffer.end(), 1);
  config.arcs = ArcSet(sentence_len);
  config.sentence_len = sentence_len;
  return config;
}

bool arc_eager_legal(const Configuration& config, const Transition& t) {
  if (config.buffer.empty()) return false;
  switch (t.kind) {
    case TransitionKind::Shift: return true;
    case TransitionKind::RightArc: return !config.stack.empty();
    case TransitionKind::LeftArc: return left_arc_possible(config);
    case TransitionKind::Reduce: {
      const auto top = config.stack_top();
      return top && config.arcs.has_head(*top);
    }
  }
  return false;
}

Configuration arc_eager_apply(const Configuration& config, const Transition& t) {
  if (!arc_eager_legal(config, t)) illegal(config, t);
  Configuration next = config;
  switch (t.kind) {
    case TransitionKind::Shift:
      next.stack.push_back(next.buffer.front());
      next.buffer.erase(next.buffer.begin());
      break;
    case TransitionKind::Reduce:
      next.stack.pop_back();
      break;
    case TransitionKind::LeftArc:
      next.arcs.add(next.buffer.front(), t.relation, next.stack.back());
      next.stack.pop_back();
      break;
    case TransitionKind::RightArc: {
      const int b = next.buffer.front();
      next.arcs.add(next.stack.back(), t.relation, b);
      next.buffer.erase(next.buffer.begin());
      next.stack.push_back(b);
      break;
    }
  }
  return next;
}

bool baseline_legal(const Configuration& config, const Transition& t) {
  if (config.buffer.empty()) return false;
  switch (t.kind) {
    case TransitionKind::Shift: return true;
    case TransitionKind::LeftArc: return left_arc_possible(config);
    case TransitionKind::RightArc: return !config.stack.empty();
    case TransitionKind::Reduce: return false;
  }
  return false;
}

Configuration baseline_apply(const Configuration& config, const Transition& t) {
  if (!baseline_legal(config, t)) illegal(config, t);
  Configuration next = config;
  switch (t.kind) {
    case TransitionKind::Shift:
      next.stack.push_back(next.buffer.front());
      next.buffer.erase(next.buffer.begin());
      break;
    case TransitionKind::LeftArc:
      next.arcs.add(next.buffer.front(), t.relation, next.stack.back());
      next.stack.pop_back();
      break;
    case TransitionKind::RightArc: {
      const int s = next.stack.back();
      next.arcs.add(s, t.relation, next.buffer.front());
      next.stack.pop_back();
      next.buffer.front() = s;
      break;
    }
    case TransitionKind::Reduce:
      illegal(config, t);
  }
  return next;
}

ArcSet finalize(const Configuration& config, std::string_view default_relation) {
  if (!config.buffer.empty()) {
    throw Error(Errc::NotTerminal, std::to_string(config.buffer.size()) + " tokens left in buffer");
  }
  ArcSet arcs = config.arcs;
  const int n = static_cast<int>(config.sentence_len);
  for (int k = 1; k <= n; ++k) {
    if (!arcs.has_head(k)) arcs.add(kRoot, std::string(default_relation), k);
  }
  return arcs;
}

}  // namespace depforge
