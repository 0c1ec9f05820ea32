#include "depforge/learning_curve.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <ostream>
#include <thread>

#include "depforge/error.hpp"

namespace depforge {

std::vector<std::size_t> curve_sizes(std::size_t corpus_size, std::size_t step, std::size_t max) {
  if (step == 0) throw Error(Errc::InvalidArgument, "learning-curve step must be at least 1");
  const std::size_t limit = std::min(max, corpus_size);
  std::vector<std::size_t> sizes;
  for (std::size_t size = step; size < limit; size += step) sizes.push_back(size);
  if (limit > 0) sizes.push_back(limit);
  return sizes;
}

std::vector<CurveRow> learning_curve(std::span<const Sentence> train, std::span<const Sentence> test,
                                     const CurveOptions& options) {
  const auto sizes = curve_sizes(train.size(), options.step, options.max);
  std::vector<CurveRow> rows;
  for (const auto& spec : options.classifiers) {
    for (auto size : sizes) rows.push_back({spec.kind, size, std::nullopt, {}});
  }

  auto run_cell = [&](std::size_t index) {
    auto& row = rows[index];
    const auto& spec = options.classifiers[index / sizes.size()];
    try {
      auto trained = train_parser(train.first(row.size), options.system, options.templates, spec);
      std::vector<Sentence> parsed;
      parsed.reserve(test.size());
      for (const auto& sentence : test) parsed.push_back(parse_sentence(trained.model, sentence));
      row.score = score(test, parsed, options.punct);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(options.jobs, rows.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) run_cell(i);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < rows.size(); i = next++) run_cell(i);
    });
  }
  for (auto& t : pool) t.join();
  return rows;
}

void write_curve_tsv(std::ostream& out, std::span<const CurveRow> rows) {
  out << "classifier\tsize\tlas\tuas\n";
  char buf[64];
  for (const auto& row : rows) {
    out << row.classifier << '\t' << row.size << '\t';
    if (row.score) {
      std::snprintf(buf, sizeof buf, "%.4f\t%.4f", row.score->las, row.score->uas);
      out << buf << '\n';
    } else {
      out << "NA\tNA\n";
    }
  }
}

}  // namespace depforge
