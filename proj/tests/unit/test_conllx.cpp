#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "depforge/conllx.hpp"
#include "depforge/error.hpp"
#include "trees.hpp"

using namespace depforge;
using namespace depforge::testing;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string fixture(const std::string& name) { return std::string(DEPFORGE_FIXTURES) + "/" + name; }

Errc read_error(const std::string& text) {
  std::istringstream in(text);
  try {
    read_conllx(in);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::Io;
}

std::string write(const std::vector<Sentence>& s) {
  std::ostringstream out;
  write_conllx(out, s);
  return out.str();
}

}  // namespace

TEST_CASE("minimal two-token file") {
  const auto sentences = read_conllx_file(fixture("two_token.conll"));
  REQUIRE(sentences.size() == 1);
  const auto& s = sentences[0];
  REQUIRE(s.size() == 2);
  CHECK(s.token(1).head == 2);
  CHECK(s.token(2).head == 0);
  CHECK(s.token(1).deprel == "det");
  CHECK_FALSE(s.token(1).lemma.has_value());
  CHECK(s.token(1).pdeprel == "_");
  CHECK(write(sentences) == slurp(fixture("two_token.conll")));
}

TEST_CASE("write then read is byte identical on well-formed fixtures") {
  for (const char* name : {"two_token.conll", "tiny.conll", "punct.conll", "multi.conll", "nonprojective.conll"}) {
    CAPTURE(name);
    CHECK(write(read_conllx_file(fixture(name))) == slurp(fixture(name)));
  }
}

TEST_CASE("CRLF input is accepted and LF is emitted") {
  auto crlf = slurp(fixture("crlf.conll"));
  std::string lf;
  for (char c : crlf) {
    if (c != '\r') lf += c;
  }
  CHECK(write(read_conllx_file(fixture("crlf.conll"))) == lf);
}

TEST_CASE("multi fixture keeps opaque columns and absent heads") {
  const auto s = read_conllx_file(fixture("multi.conll"));
  REQUIRE(s.size() == 4);
  CHECK(s[0].token(1).feats == "num=sg|case=nom");
  CHECK(s[0].token(1).phead == "2");
  CHECK(s[0].token(5).form == "grüßt");
  CHECK_FALSE(s[2].token(1).head.has_value());
  CHECK_FALSE(s[2].token(1).deprel.has_value());
  CHECK(s[3].token(1).head == 0);
  CHECK(s[3].token(2).head == 0);
}

TEST_CASE("malformed input raises the matching error") {
  CHECK(read_error(slurp(fixture("malformed/wrong_columns.conll"))) == Errc::WrongColumnCount);
  CHECK(read_error(slurp(fixture("malformed/non_numeric_id.conll"))) == Errc::NonNumericId);
  CHECK(read_error(slurp(fixture("malformed/head_out_of_range.conll"))) == Errc::HeadOutOfRange);
  CHECK(read_error(slurp(fixture("malformed/empty.conll"))) == Errc::EmptyFile);
  CHECK(read_error(slurp(fixture("malformed/blank_only.conll"))) == Errc::EmptyFile);
  CHECK(read_error(slurp(fixture("malformed/cyclic.conll"))) == Errc::CyclicHeads);
  CHECK(read_error(slurp(fixture("malformed/gapped_ids.conll"))) == Errc::InvariantViolation);
  CHECK(read_error("1\ta\t_\tX\tX\t_\tzero\troot\t_\t_\n") == Errc::NonNumericId);
  CHECK(read_error("1\ta\t_\tX\tX\t_\t1\troot\t_\t_\n") == Errc::HeadOutOfRange);
}

TEST_CASE("writing an invalid sentence fails") {
  std::ostringstream out;
  CHECK_THROWS_AS(write_conllx(out, std::vector<Sentence>{Sentence{}}), Error);
  auto s = make_sentence({2, 0});
  s.tokens[1].id = 5;
  try {
    write_conllx(out, std::vector<Sentence>{s});
    FAIL("expected InvariantViolation");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InvariantViolation);
  }
  auto cyclic = make_sentence({2, 1});
  CHECK_THROWS_AS(write_conllx(out, std::vector<Sentence>{cyclic}), Error);
}

TEST_CASE("absent pdeprel is written as underscore") {
  auto s = make_sentence({0});
  const auto text = write({s});
  CHECK(text == "1\tw1\t_\tDT\tDT\t_\t0\tdep\t_\t_\n\n");
}

TEST_CASE("read of write is the identity on random sentences") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 9);
    auto s = make_sentence(random_tree(n, rng));
    if (trial % 3 == 0) s.tokens[0].lemma = "lemma,with|stuff";
    if (trial % 5 == 0) s.tokens[0].head.reset();
    std::istringstream in(write({s}));
    CHECK(read_conllx(in) == std::vector<Sentence>{s});
  }
}

TEST_CASE("projectivity examples") {
  CHECK(is_projective(std::vector<int>{2, 3, 4, 0}));
  CHECK_FALSE(is_projective(std::vector<int>{0, 4, 1, 1}));
  CHECK_FALSE(is_projective(read_conllx_file(fixture("nonprojective.conll"))[0]));
  auto missing = make_sentence({2, 0});
  missing.tokens[0].head.reset();
  try {
    is_projective(missing);
    FAIL("expected MissingHead");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MissingHead);
  }
}

TEST_CASE("projectivity agrees with the crossing-arc check") {
  for (int n = 1; n <= 4; ++n) {
    for (const auto& heads : all_trees(n)) {
      CAPTURE(n);
      CHECK(is_projective(heads) == brute_no_crossing(heads));
    }
  }
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const auto heads = random_tree(n, rng, true);
    REQUIRE(is_acyclic(heads));
    CHECK(is_projective(heads) == brute_no_crossing(heads));
  }
}

TEST_CASE("gold arcs and heads") {
  const auto s = read_conllx_file(fixture("tiny.conll"))[0];
  CHECK(heads_of(s) == std::vector<int>{2, 3, 0});
  const auto arcs = gold_arcs(s);
  CHECK(arcs.size() == 3);
  CHECK(arcs.contains(2, "det", 1));
  CHECK(arcs.contains(0, "root", 3));
  CHECK(arcs.leftmost_dependent(3) == 2);
  CHECK_FALSE(arcs.leftmost_dependent(1).has_value());
}

TEST_CASE("arc set keeps one head per dependent") {
  ArcSet arcs(3);
  arcs.add(0, "root", 2);
  CHECK_THROWS_AS(arcs.add(1, "x", 2), Error);
  CHECK_THROWS_AS(arcs.add(1, "x", 0), Error);
  arcs.add(2, "a", 3);
  arcs.add(2, "b", 1);
  CHECK(arcs.dependents(2) == std::vector<int>{1, 3});
  CHECK(arcs.rightmost_dependent(2) == 3);
  CHECK(*arcs.relation(1) == "b");
  CHECK(arcs.connects(3, 2));
  CHECK_FALSE(arcs.connects(1, 3));
}
