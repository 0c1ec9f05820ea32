#pragma once

#include <cstdint>

#include "depforge/classifier.hpp"

namespace depforge {

enum class LinearLoss { Hinge, Logistic };

struct LinearOptions {
  LinearLoss loss = LinearLoss::Hinge;
  std::size_t epochs = 10;
  double eta0 = 0.1;
  double lambda = 1e-5;
  std::uint64_t seed = 42;
};

/// One-versus-rest linear model over the one-hot binarized feature space,
/// trained by SGD with L2 regularization. The step size decays as
/// eta0 / (1 + t / N) where t counts updates and N is the training set size.
/// Each class vector is kept as scale * v so the L2 shrink is O(1) per step.
class LinearModel final : public Classifier {
 public:
  explicit LinearModel(LinearOptions options = {});

  std::string_view kind() const override;
  void train(std::span<const Instance> instances, const Schema& schema) override;
  std::vector<ScoredClass> predict(std::span<const SymbolId> values) const override;
  void save(std::ostream& out) const override;
  void load(std::istream& in, const Schema& schema) override;
  Params params() const override;

  const LinearOptions& options() const { return options_; }
  std::size_t dimension() const { return dimension_; }
  /// Effective weight (scale folded in).
  double weight(ClassId cls, std::uint32_t coordinate) const;

  /// lambda/2 * sum_c |w_c|^2 + mean over instances of the summed
  /// per-class losses.
  double objective(std::span<const Instance> instances) const;

  /// When enabled, train() records objective() after every epoch.
  void track_objective(bool enabled) { track_objective_ = enabled; }
  const std::vector<double>& epoch_objectives() const { return epoch_objectives_; }

 private:
  double raw_score(std::size_t slot, std::span<const std::uint32_t> active) const;
  std::vector<std::uint32_t> active_coordinates(std::span<const SymbolId> values) const;
  void fold_scale(std::size_t slot);

  LinearOptions options_;
  std::size_t dimension_ = 0;
  std::vector<ClassId> classes_;  // training-observed classes, ascending
  std::vector<double> weights_;   // classes_.size() x dimension_
  std::vector<double> scale_;
  bool track_objective_ = false;
  std::vector<double> epoch_objectives_;
};

}  // namespace depforge
