#include "depforge/naive_bayes.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "depforge/error.hpp"

namespace depforge {

NaiveBayes::NaiveBayes(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0)) throw Error(Errc::InvalidArgument, "nb: alpha must be positive");
}

void NaiveBayes::train(std::span<const Instance> instances, const Schema& schema) {
  check_training_set(instances, schema);
  schema_ = schema;
  class_counts_.assign(schema.num_classes, 0.0);
  counts_.assign(schema.feature_count(), ValueCounts{});
  total_ = static_cast<double>(instances.size());
  for (const auto& inst : instances) {
    class_counts_[inst.label] += 1.0;
    for (std::size_t t = 0; t < inst.values.size(); ++t) {
      auto& row = counts_[t][inst.values[t]];
      if (row.empty()) row.assign(schema.num_classes, 0.0);
      row[inst.label] += 1.0;
    }
  }
}

std::vector<ScoredClass> NaiveBayes::predict(std::span<const SymbolId> values) const {
  if (values.size() != counts_.size()) {
    throw Error(Errc::DimensionMismatch, "nb: expected " + std::to_string(counts_.size()) + " values");
  }
  std::vector<ScoredClass> ranked;
  for (ClassId c = 0; c < class_counts_.size(); ++c) {
    const double nc = class_counts_[c];
    if (nc <= 0.0) continue;
    double score = std::log(nc / total_);
    for (std::size_t t = 0; t < values.size(); ++t) {
      const auto& table = counts_[t];
      double count = 0.0;
      if (auto it = table.find(values[t]); it != table.end()) count = it->second[c];
      const double vocab = static_cast<double>(table.size());
      score += std::log((count + alpha_) / (nc + alpha_ * (vocab + 1.0)));
    }
    ranked.push_back({c, score});
  }
  // normalize to log posteriors
  double peak = -std::numeric_limits<double>::infinity();
  for (const auto& r : ranked) peak = std::max(peak, r.score);
  double sum = 0.0;
  for (const auto& r : ranked) sum += std::exp(r.score - peak);
  const double log_z = peak + std::log(sum);
  for (auto& r : ranked) r.score -= log_z;
  sort_ranked(ranked);
  return ranked;
}

void NaiveBayes::save(std::ostream& out) const {
  out.precision(17);
  out << "alpha\t" << alpha_ << '\n';
  for (ClassId c = 0; c < class_counts_.size(); ++c) {
    if (class_counts_[c] > 0.0) out << "prior\t" << c << '\t' << class_counts_[c] << '\n';
  }
  for (std::size_t t = 0; t < counts_.size(); ++t) {
    for (const auto& [value, row] : counts_[t]) {
      for (ClassId c = 0; c < row.size(); ++c) {
        if (row[c] > 0.0) out << c << '\t' << t << '\t' << value.raw() << '\t' << row[c] << '\n';
      }
    }
  }
}

void NaiveBayes::load(std::istream& in, const Schema& schema) {
  schema_ = schema;
  class_counts_.assign(schema.num_classes, 0.0);
  counts_.assign(schema.feature_count(), ValueCounts{});
  total_ = 0.0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    auto fail = [&] { throw Error(Errc::BadModel, "nb classifier line " + std::to_string(line_no)); };
    if (line.rfind("alpha\t", 0) == 0) {
      std::string key;
      if (!(row >> key >> alpha_)) fail();
    } else if (line.rfind("prior\t", 0) == 0) {
      std::string key;
      ClassId c = 0;
      double n = 0;
      if (!(row >> key >> c >> n) || c >= schema.num_classes) fail();
      class_counts_[c] = n;
      total_ += n;
    } else {
      ClassId c = 0;
      std::size_t t = 0;
      std::uint32_t value = 0;
      double n = 0;
      if (!(row >> c >> t >> value >> n) || c >= schema.num_classes || t >= counts_.size()) fail();
      auto& cells = counts_[t][SymbolId{value}];
      if (cells.empty()) cells.assign(schema.num_classes, 0.0);
      cells[c] = n;
    }
  }
  if (total_ <= 0.0) throw Error(Errc::BadModel, "nb classifier has no class priors");
}

Params NaiveBayes::params() const {
  std::ostringstream a;
  a.precision(17);
  a << alpha_;
  return {{"alpha", a.str()}};
}

}  // namespace depforge
