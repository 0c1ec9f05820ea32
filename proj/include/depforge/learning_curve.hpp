#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "depforge/eval.hpp"
#include "depforge/parser.hpp"

namespace depforge {

/// step, 2*step, ... below min(max, corpus_size), then min(max, corpus_size)
/// itself; no size repeats. Throws Errc::InvalidArgument when step is 0.
std::vector<std::size_t> curve_sizes(std::size_t corpus_size, std::size_t step, std::size_t max);

struct CurveOptions {
  std::vector<ClassifierSpec> classifiers;
  std::size_t step = 1000;
  std::size_t max = 11000;
  SystemKind system = SystemKind::ArcEager;
  std::vector<FeatureTemplate> templates = default_templates();
  PunctMode punct = PunctMode::Exclude;
  std::size_t jobs = 1;
};

struct CurveRow {
  std::string classifier;
  std::size_t size = 0;
  std::optional<Score> score;  // empty when the cell failed
  std::string error;
};

/// Trains on the first `size` sentences for every (classifier, size) cell
/// and scores the parsed test corpus. A failing cell is recorded and the
/// sweep continues. Rows are ordered by classifier (as given), then size,
/// regardless of `jobs`.
std::vector<CurveRow> learning_curve(std::span<const Sentence> train, std::span<const Sentence> test,
                                     const CurveOptions& options);

/// `classifier\tsize\tlas\tuas` with fractions to 4 decimals; failed cells
/// print NA.
void write_curve_tsv(std::ostream& out, std::span<const CurveRow> rows);

}  // namespace depforge
