#include "depforge/conllx.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "depforge/error.hpp"

namespace depforge {

namespace {

constexpr std::string_view kAbsent = "_";
constexpr std::size_t kColumns = 10;

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::optional<int> parse_int(std::string_view text) {
  int value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) return std::nullopt;
  return value;
}

std::optional<std::string> optional_field(std::string_view text) {
  if (text == kAbsent) return std::nullopt;
  return std::string(text);
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return c == ' ' || c == '\t'; });
}

std::string where(std::size_t line_no) { return "line " + std::to_string(line_no); }

bool bad_field(std::string_view text) {
  return text.empty() || text.find_first_of("\t\n\r") != std::string_view::npos;
}

bool bad_optional(const std::optional<std::string>& text) {
  return text && (bad_field(*text) || *text == kAbsent);
}

void check_heads(const Sentence& sentence, std::size_t sentence_no) {
  const int n = static_cast<int>(sentence.size());
  bool complete = true;
  for (const auto& tok : sentence.tokens) {
    if (!tok.head) {
      complete = false;
      continue;
    }
    if (*tok.head < 0 || *tok.head > n || *tok.head == tok.id) {
      throw Error(Errc::HeadOutOfRange,
                  "sentence " + std::to_string(sentence_no) + ", token " +
                      std::to_string(tok.id) + " has head " + std::to_string(*tok.head));
    }
  }
  if (complete && !is_acyclic(heads_of(sentence))) {
    throw Error(Errc::CyclicHeads, "sentence " + std::to_string(sentence_no));
  }
}

}  // namespace

ArcSet::ArcSet(std::size_t sentence_len)
    : heads_(sentence_len + 1, -1), relations_(sentence_len + 1) {}

void ArcSet::add(int head, std::string relation, int dependent) {
  if (dependent <= 0 || !in_range(dependent) || !in_range(head) || head == dependent) {
    throw Error(Errc::InvariantViolation, "arc " + std::to_string(head) + " -> " +
                                              std::to_string(dependent) + " out of range");
  }
  auto slot = static_cast<std::size_t>(dependent);
  if (heads_[slot] >= 0) {
    throw Error(Errc::InvariantViolation,
                "token " + std::to_string(dependent) + " already has a head");
  }
  heads_[slot] = head;
  relations_[slot] = std::move(relation);
  ++count_;
}

bool ArcSet::has_head(int dependent) const {
  return dependent > 0 && in_range(dependent) && heads_[static_cast<std::size_t>(dependent)] >= 0;
}

std::optional<int> ArcSet::head(int dependent) const {
  if (!has_head(dependent)) return std::nullopt;
  return heads_[static_cast<std::size_t>(dependent)];
}

const std::string* ArcSet::relation(int dependent) const {
  if (!has_head(dependent)) return nullptr;
  return &relations_[static_cast<std::size_t>(dependent)];
}

bool ArcSet::contains(int head, std::string_view relation, int dependent) const {
  return has_head(dependent) && heads_[static_cast<std::size_t>(dependent)] == head &&
         relations_[static_cast<std::size_t>(dependent)] == relation;
}

bool ArcSet::connects(int a, int b) const {
  return (has_head(a) && *this->head(a) == b) || (has_head(b) && *this->head(b) == a);
}

std::optional<int> ArcSet::leftmost_dependent(int head) const {
  for (std::size_t d = 1; d < heads_.size(); ++d) {
    if (heads_[d] == head) return static_cast<int>(d);
  }
  return std::nullopt;
}

std::optional<int> ArcSet::rightmost_dependent(int head) const {
  for (std::size_t d = heads_.size(); d-- > 1;) {
    if (heads_[d] == head) return static_cast<int>(d);
  }
  return std::nullopt;
}

std::vector<int> ArcSet::dependents(int head) const {
  std::vector<int> out;
  for (std::size_t d = 1; d < heads_.size(); ++d) {
    if (heads_[d] == head) out.push_back(static_cast<int>(d));
  }
  return out;
}

std::vector<Arc> ArcSet::arcs() const {
  std::vector<Arc> out;
  out.reserve(count_);
  for (std::size_t d = 1; d < heads_.size(); ++d) {
    if (heads_[d] >= 0) out.push_back({heads_[d], relations_[d], static_cast<int>(d)});
  }
  return out;
}

std::vector<Sentence> read_conllx(std::istream& in) {
  std::vector<Sentence> sentences;
  Sentence current;
  std::string line;
  std::size_t line_no = 0;

  auto flush = [&] {
    if (current.empty()) return;
    check_heads(current, sentences.size() + 1);
    sentences.push_back(std::move(current));
    current = Sentence{};
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) {
      flush();
      continue;
    }
    const auto cols = split_tabs(line);
    if (cols.size() != kColumns) {
      throw Error(Errc::WrongColumnCount, where(line_no) + ": expected 10 columns, found " +
                                              std::to_string(cols.size()));
    }
    const auto id = parse_int(cols[0]);
    if (!id) throw Error(Errc::NonNumericId, where(line_no) + ": id '" + std::string(cols[0]) + "'");
    if (*id != static_cast<int>(current.size()) + 1) {
      throw Error(Errc::InvariantViolation,
                  where(line_no) + ": expected id " + std::to_string(current.size() + 1));
    }
    Token tok;
    tok.id = *id;
    tok.form = std::string(cols[1]);
    tok.lemma = optional_field(cols[2]);
    tok.cpostag = std::string(cols[3]);
    tok.postag = std::string(cols[4]);
    tok.feats = optional_field(cols[5]);
    if (cols[6] != kAbsent) {
      const auto head = parse_int(cols[6]);
      if (!head) {
        throw Error(Errc::NonNumericId, where(line_no) + ": head '" + std::string(cols[6]) + "'");
      }
      tok.head = *head;
    }
    tok.deprel = optional_field(cols[7]);
    tok.phead = std::string(cols[8]);
    tok.pdeprel = std::string(cols[9]);
    current.tokens.push_back(std::move(tok));
  }
  flush();
  if (sentences.empty()) throw Error(Errc::EmptyFile, "no sentences in input");
  return sentences;
}

std::vector<Sentence> read_conllx_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  return read_conllx(in);
}

void validate(const Sentence& sentence) {
  if (sentence.empty()) throw Error(Errc::InvariantViolation, "empty sentence");
  const int n = static_cast<int>(sentence.size());
  bool complete = true;
  for (int k = 1; k <= n; ++k) {
    const auto& tok = sentence.token(k);
    if (tok.id != k) {
      throw Error(Errc::InvariantViolation, "token ids must be consecutive from 1");
    }
    if (bad_field(tok.form) || bad_field(tok.cpostag) || bad_field(tok.postag) ||
        bad_field(tok.phead) || bad_field(tok.pdeprel) || bad_optional(tok.lemma) ||
        bad_optional(tok.feats) || bad_optional(tok.deprel)) {
      throw Error(Errc::InvariantViolation, "token " + std::to_string(k) + " has an unwritable field");
    }
    if (!tok.head) {
      complete = false;
    } else if (*tok.head < 0 || *tok.head > n || *tok.head == k) {
      throw Error(Errc::InvariantViolation, "token " + std::to_string(k) + " head out of range");
    }
  }
  if (complete && !is_acyclic(heads_of(sentence))) {
    throw Error(Errc::InvariantViolation, "cyclic heads");
  }
}

void write_conllx(std::ostream& out, std::span<const Sentence> sentences) {
  auto opt = [](const std::optional<std::string>& v) -> std::string_view {
    return v ? std::string_view(*v) : kAbsent;
  };
  for (const auto& sentence : sentences) {
    validate(sentence);
    for (const auto& tok : sentence.tokens) {
      out << tok.id << '\t' << tok.form << '\t' << opt(tok.lemma) << '\t' << tok.cpostag << '\t'
          << tok.postag << '\t' << opt(tok.feats) << '\t';
      if (tok.head) {
        out << *tok.head;
      } else {
        out << kAbsent;
      }
      out << '\t' << opt(tok.deprel) << '\t' << tok.phead << '\t' << tok.pdeprel << '\n';
    }
    out << '\n';
  }
}

void write_conllx_file(const std::string& path, std::span<const Sentence> sentences) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path);
  write_conllx(out, sentences);
  if (!out) throw Error(Errc::Io, "write failed for " + path);
}

std::vector<int> heads_of(const Sentence& sentence) {
  std::vector<int> heads;
  heads.reserve(sentence.size());
  for (const auto& tok : sentence.tokens) {
    if (!tok.head) throw Error(Errc::MissingHead, "token " + std::to_string(tok.id));
    heads.push_back(*tok.head);
  }
  return heads;
}

ArcSet gold_arcs(const Sentence& sentence) {
  ArcSet arcs(sentence.size());
  for (const auto& tok : sentence.tokens) {
    if (!tok.head) throw Error(Errc::MissingHead, "token " + std::to_string(tok.id));
    arcs.add(*tok.head, tok.deprel.value_or("_"), tok.id);
  }
  return arcs;
}

bool is_acyclic(std::span<const int> heads) {
  const int n = static_cast<int>(heads.size());
  // 0 = unvisited, 1 = on current path, 2 = reaches root
  std::vector<int> state(heads.size() + 1, 0);
  state[0] = 2;
  for (int start = 1; start <= n; ++start) {
    std::vector<int> path;
    int k = start;
    while (state[static_cast<std::size_t>(k)] == 0) {
      state[static_cast<std::size_t>(k)] = 1;
      path.push_back(k);
      const int h = heads[static_cast<std::size_t>(k - 1)];
      if (h < 0 || h > n) return false;
      k = h;
    }
    if (state[static_cast<std::size_t>(k)] == 1) return false;
    for (int p : path) state[static_cast<std::size_t>(p)] = 2;
  }
  return true;
}

bool is_projective(std::span<const int> heads) {
  const int n = static_cast<int>(heads.size());
  auto head_of = [&](int k) { return heads[static_cast<std::size_t>(k - 1)]; };
  auto dominated_by = [&](int node, int ancestor) {
    if (ancestor == 0) return true;
    for (int k = node; k != 0; k = head_of(k)) {
      if (k == ancestor) return true;
    }
    return false;
  };
  for (int dep = 1; dep <= n; ++dep) {
    const int head = head_of(dep);
    const int lo = std::min(head, dep);
    const int hi = std::max(head, dep);
    for (int k = lo + 1; k < hi; ++k) {
      if (!dominated_by(k, head)) return false;
    }
  }
  return true;
}

bool is_projective(const Sentence& sentence) {
  const auto heads = heads_of(sentence);
  return is_projective(std::span<const int>(heads));
}

}  // namespace depforge
