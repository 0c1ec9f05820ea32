#include "depforge/knn.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "depforge/error.hpp"
#include "depforge/gain_ratio.hpp"

namespace depforge {

namespace {

constexpr double kTieTolerance = 1e-9;

}  // namespace

Knn::Knn(std::size_t k) : k_(k) {
  if (k == 0) throw Error(Errc::InvalidArgument, "knn: k must be at least 1");
}

void Knn::train(std::span<const Instance> instances, const Schema& schema) {
  check_training_set(instances, schema);
  schema_ = schema;
  memory_.assign(instances.begin(), instances.end());
  weights_ = gain_ratio_weights(memory_, schema.num_classes);
  count_classes();
}

void Knn::count_classes() {
  class_freq_.assign(schema_.num_classes, 0.0);
  for (const auto& inst : memory_) class_freq_[inst.label] += 1.0;
}

double Knn::distance(std::span<const SymbolId> a, std::span<const SymbolId> b) const {
  double d = 0.0;
  for (std::size_t t = 0; t < weights_.size(); ++t) {
    if (!(a[t] == b[t])) d += weights_[t];
  }
  return d;
}

std::vector<ScoredClass> Knn::predict(std::span<const SymbolId> values) const {
  if (values.size() != weights_.size()) {
    throw Error(Errc::DimensionMismatch, "knn: expected " + std::to_string(weights_.size()) + " values");
  }
  std::vector<double> dist(memory_.size());
  for (std::size_t i = 0; i < memory_.size(); ++i) dist[i] = distance(values, memory_[i].values);

  const std::size_t k = std::min(k_, memory_.size());
  std::vector<double> sorted = dist;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k - 1), sorted.end());
  const double cutoff = sorted[k - 1];
  const double slack = kTieTolerance * std::max(1.0, cutoff);

  std::vector<double> votes(schema_.num_classes, 0.0);
  for (std::size_t i = 0; i < memory_.size(); ++i) {
    if (dist[i] <= cutoff + slack) votes[memory_[i].label] += 1.0;
  }

  // Frequency fraction in [0, 1) breaks vote ties without reordering votes.
  const double total = static_cast<double>(memory_.size()) + 1.0;
  std::vector<ScoredClass> ranked;
  for (ClassId c = 0; c < class_freq_.size(); ++c) {
    if (class_freq_[c] <= 0.0) continue;
    const double tiebreak = class_freq_[c] / total;
    ranked.push_back({c, votes[c] > 0.0 ? votes[c] + tiebreak : tiebreak - 1.0});
  }
  sort_ranked(ranked);
  return ranked;
}

void Knn::save(std::ostream& out) const {
  out.precision(17);
  out << "k " << k_ << '\n';
  out << "weights ";
  for (std::size_t t = 0; t < weights_.size(); ++t) out << (t ? "," : "") << weights_[t];
  out << '\n';
  for (const auto& inst : memory_) {
    for (const auto& v : inst.values) out << v.raw() << ',';
    out << inst.label << '\n';
  }
}

void Knn::load(std::istream& in, const Schema& schema) {
  schema_ = schema;
  memory_.clear();
  weights_.clear();
  std::string line;
  auto fail = [](const std::string& why) { throw Error(Errc::BadModel, "knn: " + why); };

  if (!std::getline(in, line) || line.rfind("k ", 0) != 0) fail("missing k line");
  k_ = std::stoul(line.substr(2));
  if (k_ == 0) fail("k must be at least 1");
  if (!std::getline(in, line) || line.rfind("weights ", 0) != 0) fail("missing weights line");
  {
    std::istringstream cells(line.substr(8));
    std::string cell;
    while (std::getline(cells, cell, ',')) weights_.push_back(std::stod(cell));
  }
  if (weights_.size() != schema.feature_count()) fail("weight count does not match templates");

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream cells(line);
    std::string cell;
    std::vector<unsigned long> fields;
    while (std::getline(cells, cell, ',')) fields.push_back(std::stoul(cell));
    if (fields.size() != schema.feature_count() + 1) fail("instance width mismatch");
    Instance inst;
    for (std::size_t t = 0; t < schema.feature_count(); ++t) {
      inst.values.emplace_back(static_cast<std::uint32_t>(fields[t]));
    }
    inst.label = static_cast<ClassId>(fields.back());
    if (inst.label >= schema.num_classes) fail("class out of range");
    memory_.push_back(std::move(inst));
  }
  if (memory_.empty()) fail("no stored instances");
  count_classes();
}

Params Knn::params() const { return {{"k", std::to_string(k_)}}; }

}  // namespace depforge
