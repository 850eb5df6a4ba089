#include "doctest.h"

#include <sstream>

#include "oracles.h"
#include "softskill/error.h"
#include "softskill/matcher.h"
#include "synthetic.h"

using namespace softskill;

namespace {

SkillLexicon make_lexicon(const std::vector<std::string>& phrases) {
  SkillLexicon lex;
  for (const std::string& p : phrases) lex.add(1, p);
  return lex;
}

}  // namespace

TEST_SUITE("matcher") {

TEST_CASE("longest match wins at a position") {
  const SkillLexicon lex = make_lexicon({"team", "team player", "player"});
  const MatchIndex index(lex);
  const auto m = index.find_matches({"a", "team", "player", "and", "player"});
  REQUIRE(m.size() == 2);
  CHECK(m[0] == Match{1, 1, 3});
  CHECK(m[1] == Match{2, 4, 5});
}

TEST_CASE("matches do not overlap and prefer the leftmost start") {
  const SkillLexicon lex = make_lexicon({"a b", "b c"});
  const auto m = find_matches({"a", "b", "c"}, build_index(lex));
  REQUIRE(m.size() == 1);
  CHECK(m[0] == Match{0, 0, 2});
}

TEST_CASE("a failed long path falls back to a shorter phrase") {
  const SkillLexicon lex = make_lexicon({"a", "a b c"});
  const auto m = find_matches({"a", "b", "d"}, build_index(lex));
  REQUIRE(m.size() == 1);
  CHECK(m[0] == Match{0, 0, 1});
}

TEST_CASE("empty lexicon and empty input") {
  CHECK(MatchIndex().find_matches({"a"}).empty());
  CHECK(MatchIndex(make_lexicon({"a"})).find_matches({}).empty());
}

TEST_CASE("reserved tokens in the input are rejected") {
  const MatchIndex index(make_lexicon({"a"}));
  CHECK_THROWS_AS(index.find_matches({"a", "xxx"}), InputError);
  CHECK_THROWS_AS(index.find_matches({"<begin>"}), InputError);
}

TEST_CASE("trie size") {
  const MatchIndex index(make_lexicon({"a b", "a c", "d"}));
  CHECK(index.node_count() == 5);
  CHECK(index.accepting_state_count() == 3);
}

TEST_CASE("extract_snippet clips the window at the edges") {
  const TokenSequence tokens = {"w0", "w1", "w2", "skill", "w4", "w5"};
  const Snippet s = extract_snippet(tokens, {7, 3, 4}, 2, "9:1");
  CHECK(s.left == TokenSequence{"w1", "w2"});
  CHECK(s.skill == TokenSequence{"skill"});
  CHECK(s.right == TokenSequence{"w4", "w5"});
  CHECK(s.skill_id == 7);
  CHECK(s.source_id == "9:1");
  const Snippet wide = extract_snippet(tokens, {7, 3, 4}, 10);
  CHECK(wide.left.size() == 3);
  CHECK(wide.right.size() == 2);
}

TEST_CASE("extract_snippet rejects matches outside the sequence") {
  CHECK_THROWS(extract_snippet({"a"}, {0, 0, 2}, 10));
  CHECK_THROWS(extract_snippet({"a"}, {0, 1, 1}, 10));
}

TEST_CASE("property: trie equals the brute-force oracle") {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t alphabet = 2 + rng.below(11);
    SkillLexicon lex;
    const std::size_t phrases = 1 + rng.below(15);
    for (std::size_t i = 0; i < phrases; ++i) {
      lex.add(1, join_tokens(synthetic::random_tokens(rng, alphabet, 5, 1)));
    }
    const MatchIndex index(lex);
    const TokenSequence tokens = synthetic::random_tokens(rng, alphabet, 40);
    REQUIRE(index.find_matches(tokens) == oracle::brute_force_matches(tokens, lex));
  }
}

TEST_CASE("property: matches are ordered and disjoint") {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    SkillLexicon lex;
    for (int i = 0; i < 8; ++i) lex.add(1, join_tokens(synthetic::random_tokens(rng, 4, 3, 1)));
    const TokenSequence tokens = synthetic::random_tokens(rng, 4, 30);
    std::size_t prev_end = 0;
    for (const Match& m : MatchIndex(lex).find_matches(tokens)) {
      CHECK(m.start >= prev_end);
      CHECK(m.end > m.start);
      CHECK(TokenSequence(tokens.begin() + m.start, tokens.begin() + m.end)
            == lex.phrase(m.skill_id).tokens);
      prev_end = m.end;
    }
  }
}

}  // TEST_SUITE
