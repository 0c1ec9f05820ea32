#pragma once

#include <span>
#include <string_view>

#include "depforge/conllx.hpp"

namespace depforge {

enum class PunctMode { Include, Exclude };

PunctMode parse_punct_mode(std::string_view text);

struct Score {
  double las = 0.0;
  double uas = 0.0;
  std::size_t counted = 0;
  std::size_t total = 0;
  std::size_t excluded = 0;
  std::size_t head_correct = 0;
  std::size_t labeled_correct = 0;
};

/// True iff `form` is nonempty UTF-8 made only of Unicode punctuation
/// (general category P*).
bool is_punctuation(std::string_view form);

/// Attachment scores of `predicted` against `gold`. Sentences and tokens must
/// align one to one with equal forms; otherwise throws Errc::Misaligned.
/// A predicted token without a head counts as wrong. With no counted tokens
/// both scores are 0.
Score score(std::span<const Sentence> gold, std::span<const Sentence> predicted,
            PunctMode mode = PunctMode::Exclude);

}  // namespace depforge
