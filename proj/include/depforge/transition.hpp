#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "depforge/conllx.hpp"

namespace depforge {

/// Index of the artificial root token.
inline constexpr int kRoot = 0;

/// Parser state. Treated as an immutable value: transition systems return a
/// fresh configuration instead of editing one in place.
struct Configuration {
  std::vector<int> stack;   // top = back()
  std::vector<int> buffer;  // front = front()
  ArcSet arcs;
  std::size_t sentence_len = 0;

  std::optional<int> stack_top() const {
    if (stack.empty()) return std::nullopt;
    return stack.back();
  }
  std::optional<int> buffer_front() const {
    if (buffer.empty()) return std::nullopt;
    return buffer.front();
  }

  bool operator==(const Configuration&) const = default;
};

enum class TransitionKind { Shift, Reduce, LeftArc, RightArc };

struct Transition {
  TransitionKind kind = TransitionKind::Shift;
  std::string relation;  // empty unless kind is an arc kind

  static Transition shift() { return {TransitionKind::Shift, {}}; }
  static Transition reduce() { return {TransitionKind::Reduce, {}}; }
  static Transition left_arc(std::string rel) { return {TransitionKind::LeftArc, std::move(rel)}; }
  static Transition right_arc(std::string rel) { return {TransitionKind::RightArc, std::move(rel)}; }

  bool is_arc() const {
    return kind == TransitionKind::LeftArc || kind == TransitionKind::RightArc;
  }

  /// Class label used by classifiers: "SHIFT", "REDUCE", "LEFT-ARC:det", ...
  std::string label() const;
  /// Inverse of label(); throws Errc::IllegalTransition for anything else.
  static Transition from_label(std::string_view label);

  bool operator==(const Transition&) const = default;
};

enum class SystemKind { ArcEager, Baseline };

std::string_view system_name(SystemKind kind);
/// Accepts "arc-eager" and "baseline".
SystemKind parse_system_name(std::string_view name);

class TransitionSystem {
 public:
  virtual ~TransitionSystem() = default;

  virtual SystemKind kind() const = 0;
  std::string_view name() const { return system_name(kind()); }

  /// stack [0], buffer [1..n], no arcs. Throws Errc::EmptySentence.
  Configuration initial(const Sentence& sentence) const;
  Configuration initial(std::size_t sentence_len) const;

  virtual bool legal(const Configuration& config, const Transition& t) const = 0;
  /// Throws Errc::IllegalTransition unless legal(config, t).
  virtual Configuration apply(const Configuration& config, const Transition& t) const = 0;
  bool is_terminal(const Configuration& config) const { return config.buffer.empty(); }

  /// Every transition of the system, arc kinds expanded over `relations`.
  virtual std::vector<Transition> all_transitions(std::span<const std::string> relations) const = 0;
};

const TransitionSystem& system_for(SystemKind kind);

bool arc_eager_legal(const Configuration& config, const Transition& t);
Configuration arc_eager_apply(const Configuration& config, const Transition& t);

/// Three-operation system: LEFT-ARC, RIGHT-ARC (which moves the stack top
/// back to the buffer front), SHIFT.
bool baseline_legal(const Configuration& config, const Transition& t);
Configuration baseline_apply(const Configuration& config, const Transition& t);

/// Root-attaches every token still headless in a terminal configuration.
/// Throws Errc::NotTerminal when the buffer is nonempty.
ArcSet finalize(const Configuration& config, std::string_view default_relation = "ROOT");

}  // namespace depforge
