#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace depforge {

/// One CoNLL-X row. Columns that may be "_" in the file are optional here;
/// PHEAD and PDEPREL are carried verbatim, including a literal "_".
struct Token {
  int id = 0;
  std::string form;
  std::optional<std::string> lemma;
  std::string cpostag;
  std::string postag;
  std::optional<std::string> feats;
  std::optional<int> head;
  std::optional<std::string> deprel;
  std::string phead = "_";
  std::string pdeprel = "_";

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  const Token& token(int id) const { return tokens[static_cast<std::size_t>(id - 1)]; }

  bool operator==(const Sentence&) const = default;
};

struct Arc {
  int head = 0;
  std::string relation;
  int dependent = 0;

  bool operator==(const Arc&) const = default;
};

/// Arcs over a sentence of fixed length, at most one per dependent.
/// Dependents are 1..n; heads are 0..n (0 is the artificial root).
class ArcSet {
 public:
  ArcSet() = default;
  explicit ArcSet(std::size_t sentence_len);

  std::size_t sentence_len() const { return heads_.empty() ? 0 : heads_.size() - 1; }
  std::size_t size() const { return count_; }

  void add(int head, std::string relation, int dependent);

  bool has_head(int dependent) const;
  std::optional<int> head(int dependent) const;
  /// Null when the dependent is unattached.
  const std::string* relation(int dependent) const;
  bool contains(int head, std::string_view relation, int dependent) const;
  /// Any arc between the two tokens, in either direction.
  bool connects(int a, int b) const;

  std::optional<int> leftmost_dependent(int head) const;
  std::optional<int> rightmost_dependent(int head) const;
  std::vector<int> dependents(int head) const;

  /// Arcs ordered by dependent.
  std::vector<Arc> arcs() const;

  bool operator==(const ArcSet&) const = default;

 private:
  bool in_range(int index) const {
    return index >= 0 && static_cast<std::size_t>(index) < heads_.size();
  }

  std::vector<int> heads_;  // -1 = unattached; slot 0 unused
  std::vector<std::string> relations_;
  std::size_t count_ = 0;
};

/// Reads sentences from a CoNLL-X stream. CRLF and LF are both accepted.
/// Rows are validated (column count, numeric ids, head range, acyclicity
/// when every head is present). Throws Errc::EmptyFile if the stream holds
/// no sentence.
std::vector<Sentence> read_conllx(std::istream& in);
std::vector<Sentence> read_conllx_file(const std::string& path);

void write_conllx(std::ostream& out, std::span<const Sentence> sentences);
void write_conllx_file(const std::string& path, std::span<const Sentence> sentences);

/// Throws Errc::InvariantViolation when ids are not 1..n or a head is out of
/// range, points at its own token, or closes a cycle.
void validate(const Sentence& sentence);

/// Head of every token (index k-1 for token k). Throws Errc::MissingHead.
std::vector<int> heads_of(const Sentence& sentence);
/// Arc set built from the HEAD/DEPREL columns; missing DEPREL becomes "_".
ArcSet gold_arcs(const Sentence& sentence);

/// Requires all heads present and acyclic; throws Errc::MissingHead otherwise.
bool is_projective(const Sentence& sentence);
/// `heads[k-1]` is the head of token k; must describe an acyclic tree.
bool is_projective(std::span<const int> heads);

/// True iff following heads from every token reaches 0.
bool is_acyclic(std::span<const int> heads);

}  // namespace depforge
