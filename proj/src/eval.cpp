#include "depforge/eval.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "depforge/error.hpp"

namespace depforge {

PunctMode parse_punct_mode(std::string_view text) {
  if (text == "include") return PunctMode::Include;
  if (text == "exclude") return PunctMode::Exclude;
  throw Error(Errc::InvalidArgument, "punct mode must be include or exclude");
}

bool is_punctuation(std::string_view form) {
  if (form.empty()) return false;
  const auto* bytes = reinterpret_cast<const uint8_t*>(form.data());
  const auto length = static_cast<int32_t>(form.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c = 0;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) return false;  // malformed UTF-8
    const auto mask = U_GET_GC_MASK(c);
    if ((mask & U_GC_P_MASK) == 0) return false;
  }
  return true;
}

Score score(std::span<const Sentence> gold, std::span<const Sentence> predicted, PunctMode mode) {
  if (gold.size() != predicted.size()) {
    throw Error(Errc::Misaligned, std::to_string(gold.size()) + " gold sentences vs " +
                                      std::to_string(predicted.size()) + " predicted");
  }
  Score s;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto& g = gold[i];
    const auto& p = predicted[i];
    if (g.size() != p.size()) {
      throw Error(Errc::Misaligned, "sentence " + std::to_string(i + 1) + ": " +
                                        std::to_string(g.size()) + " vs " + std::to_string(p.size()) +
                                        " tokens");
    }
    for (std::size_t k = 0; k < g.size(); ++k) {
      const auto& gt = g.tokens[k];
      const auto& pt = p.tokens[k];
      if (gt.form != pt.form) {
        throw Error(Errc::Misaligned, "sentence " + std::to_string(i + 1) + ", token " +
                                          std::to_string(k + 1) + ": '" + gt.form + "' vs '" +
                                          pt.form + "'");
      }
      ++s.total;
      if (mode == PunctMode::Exclude && is_punctuation(gt.form)) {
        ++s.excluded;
        continue;
      }
      ++s.counted;
      if (pt.head && gt.head == pt.head) {
        ++s.head_correct;
        if (gt.deprel == pt.deprel) ++s.labeled_correct;
      }
    }
  }
  if (s.counted > 0) {
    s.uas = static_cast<double>(s.head_correct) / static_cast<double>(s.counted);
    s.las = static_cast<double>(s.labeled_correct) / static_cast<double>(s.counted);
  }
  return s;
}

}  // namespace depforge
