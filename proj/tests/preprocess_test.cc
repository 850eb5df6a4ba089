#include "doctest.h"

#include "softskill/preprocess.h"
#include "softskill/rng.h"

using namespace softskill;

TEST_SUITE("preprocess") {

TEST_CASE("tokenize splits on whitespace and keeps commas") {
  CHECK(tokenize("Good  communication,teamwork and\tleadership")
        == TokenSequence{"good", "communication", ",", "teamwork", "and", "leadership"});
  CHECK(tokenize("a ,b") == TokenSequence{"a", ",", "b"});
  CHECK(tokenize("") == TokenSequence{});
  CHECK(tokenize("   \n ") == TokenSequence{});
}

TEST_CASE("tokenize treats no-break space as whitespace") {
  CHECK(tokenize("team\xC2\xA0player") == TokenSequence{"team", "player"});
}

TEST_CASE("tokenize strips edge punctuation but not inner") {
  CHECK(tokenize("(self-motivated)!") == TokenSequence{"self-motivated"});
  CHECK(tokenize("\xE2\x80\x9C" "detail-oriented\xE2\x80\x9D") == TokenSequence{"detail-oriented"});
  CHECK(tokenize("e.g. C++") == TokenSequence{"e.g", "c"});
  CHECK(tokenize("3.5") == TokenSequence{"3.5"});
  CHECK(tokenize("... --- !!") == TokenSequence{});
}

TEST_CASE("tokenize removes possessives") {
  CHECK(tokenize("company's culture") == TokenSequence{"company", "culture"});
  CHECK(tokenize("team\xE2\x80\x99s goals") == TokenSequence{"team", "goals"});
}

TEST_CASE("lemmatize plural rules") {
  CHECK(lemmatize("skills") == "skill");
  CHECK(lemmatize("abilities") == "ability");
  CHECK(lemmatize("classes") == "class");
  CHECK(lemmatize("boxes") == "box");
  CHECK(lemmatize("approaches") == "approach");
  CHECK(lemmatize("wishes") == "wish");
  CHECK(lemmatize("buzzes") == "buzz");
  CHECK(lemmatize("teams") == "team");
}

TEST_CASE("lemmatize leaves protected words alone") {
  CHECK(lemmatize("process") == "process");
  CHECK(lemmatize("status") == "status");
  CHECK(lemmatize("analysis") == "analysis");
  CHECK(lemmatize("its") == "its");
  CHECK(lemmatize("bus") == "bus");
  CHECK(lemmatize("sales") == "sales");
  CHECK(lemmatize("logistics") == "logistics");
  CHECK(lemmatize("skill") == "skill");
  CHECK(lemmatize("'s") == "'s");
}

TEST_CASE("normalize combines the steps") {
  CHECK(normalize("Excellent Communication Skills, strong Abilities.")
        == TokenSequence{"excellent", "communication", "skill", ",", "strong", "ability"});
}

TEST_CASE("reserved tokens") {
  CHECK(is_reserved_token("xxx"));
  CHECK(is_reserved_token("<begin>"));
  CHECK(is_reserved_token("<end>"));
  CHECK_FALSE(is_reserved_token("begin"));
  CHECK_FALSE(is_reserved_token(","));
}

TEST_CASE("join_tokens") {
  CHECK(join_tokens({"a", "b", "c"}) == "a b c");
  CHECK(join_tokens({"a", "b"}, "_") == "a_b");
  CHECK(join_tokens({}) == "");
}

TEST_CASE("property: normalize is idempotent") {
  const std::vector<std::string> pieces = {
      "Skills", "abilities", "CLASSES", "boxes,", "(team)", "player's", "status",
      "e.g.", "buses", "ties", "queries!", "\xE2\x80\x9Cquote\xE2\x80\x9D", "a",
      ",", "3.5", "self-starter", "wishes", "analysis", "-", "x", "crosses",
      "caf\xC3\xA9s", "ss", "ies", "xes"};
  Rng rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string text;
    const std::size_t n = rng.below(12);
    for (std::size_t i = 0; i < n; ++i) {
      text += pieces[rng.below(pieces.size())];
      text += rng.below(4) == 0 ? "\xC2\xA0" : " ";
    }
    const TokenSequence once = normalize(text);
    const TokenSequence twice = normalize(join_tokens(once));
    REQUIRE_MESSAGE(once == twice, text);
    for (const std::string& t : once) CHECK(lemmatize(t) == t);
  }
}

}  // TEST_SUITE
