#include "doctest.h"

#include <cmath>
#include <sstream>

#include "softskill/embed.h"
#include "softskill/error.h"
#include "softskill/represent.h"
#include "synthetic.h"

using namespace softskill;

namespace {

EmbeddingTable parse(const std::string& text, std::size_t dim) {
  std::istringstream in(text);
  return parse_embeddings(in, "vec.txt", dim, 5);
}

}  // namespace

TEST_SUITE("embed") {

TEST_CASE("parse text vectors with and without a header") {
  const EmbeddingTable a = parse("2 3\nteam 1 2 3\nwork 4 5 6\n", 3);
  const EmbeddingTable b = parse("team 1 2 3\nwork 4 5 6\n", 3);
  CHECK(a.size() == 2);
  CHECK(b.size() == 2);
  CHECK(a.words() == std::vector<std::string>{"team", "work"});
  const auto v = a.lookup("work");
  CHECK(std::vector<double>(v.begin(), v.end()) == std::vector<double>{4, 5, 6});
}

TEST_CASE("dimension mismatch is a parse error") {
  CHECK_THROWS_AS(parse("team 1 2\n", 3), ParseError);
  CHECK_THROWS_AS(parse("2 4\nteam 1 2 3\n", 3), ParseError);
  CHECK_THROWS_AS(parse("team 1 x 3\n", 3), ParseError);
}

TEST_CASE("unknown words fall back to the unk row") {
  const EmbeddingTable t = parse("team 1 2 3\n", 3);
  CHECK_FALSE(t.contains("missing"));
  const auto unk = t.unk_vector();
  const auto got = t.lookup("missing");
  CHECK(std::equal(unk.begin(), unk.end(), got.begin()));
  for (double x : unk) CHECK(std::abs(x) <= EmbeddingTable::kInitRange);
}

TEST_CASE("reserved rows are seeded and distinct") {
  const EmbeddingTable a(4, 99), b(4, 99), c(4, 100);
  const auto xa = a.lookup("xxx"), xb = b.lookup("xxx"), xc = c.lookup("xxx");
  CHECK(std::equal(xa.begin(), xa.end(), xb.begin()));
  CHECK_FALSE(std::equal(xa.begin(), xa.end(), xc.begin()));
  const auto begin = a.lookup("<begin>");
  CHECK_FALSE(std::equal(begin.begin(), begin.end(), xa.begin()));
}

TEST_CASE("duplicate words keep the first vector") {
  EmbeddingTable t(2, 1);
  const std::vector<double> one = {1, 1}, two = {2, 2};
  CHECK(t.add("w", one));
  CHECK_FALSE(t.add("w", two));
  CHECK(t.lookup("w")[0] == 1.0);
  CHECK_THROWS(t.add("v", std::vector<double>{1, 2, 3}));
}

TEST_CASE("mean embedding") {
  const EmbeddingTable t = parse("a 1 0\nb 3 4\n", 2);
  const MeanEmbedding m = mean_embedding({"a", "b"}, t);
  CHECK_FALSE(m.all_oov);
  CHECK(m.values == std::vector<double>{2, 2});
  const MeanEmbedding oov = mean_embedding({"q", "r"}, t);
  CHECK(oov.all_oov);
  CHECK(oov.values == std::vector<double>{0, 0});
  CHECK_THROWS_AS(mean_embedding({}, t), InputError);
}

TEST_CASE("property: mean embedding ignores order and is bounded by the largest norm") {
  Rng rng(21);
  EmbeddingTable t(6, 3);
  for (int i = 0; i < 30; ++i) {
    std::vector<double> v(6);
    for (double& x : v) x = rng.uniform(-1, 1);
    t.add(synthetic::word("w", i), v);
  }
  auto norm = [](std::span<const double> v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };
  for (int trial = 0; trial < 300; ++trial) {
    TokenSequence tokens;
    const std::size_t n = 1 + rng.below(6);
    for (std::size_t i = 0; i < n; ++i) tokens.push_back(synthetic::word("w", rng.below(30)));
    TokenSequence shuffled = tokens;
    rng.shuffle(shuffled);
    const auto a = mean_embedding(tokens, t).values;
    const auto b = mean_embedding(shuffled, t).values;
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-12));
    double largest = 0;
    for (const auto& w : tokens) largest = std::max(largest, norm(t.lookup(w)));
    CHECK(norm(a) <= largest + 1e-12);
  }
}

}  // TEST_SUITE

TEST_SUITE("represent") {

TEST_CASE("each mode") {
  Snippet s{{"strong"}, {"team", "player"}, {"needed"}, 4, "1:2"};
  CHECK(represent(s, RepresentationMode::kUnmodified).tokens
        == TokenSequence{"strong", "team", "player", "needed"});
  CHECK(represent(s, RepresentationMode::kMasked).tokens
        == TokenSequence{"strong", "xxx", "xxx", "needed"});
  CHECK(represent(s, RepresentationMode::kTagged).tokens
        == TokenSequence{"strong", "<begin>", "team", "player", "<end>", "needed"});
  const RepresentedInput r = represent(s, RepresentationMode::kTagged);
  CHECK(r.skill_id == 4);
  CHECK(r.source_id == "1:2");
  CHECK_FALSE(r.skill_vector.has_value());
}

TEST_CASE("masked-embed carries the mean skill vector") {
  std::istringstream in("team 1 0\nplayer 0 1\n");
  const EmbeddingTable t = parse_embeddings(in, "v", 2);
  Snippet s{{"a"}, {"team", "player"}, {}, 0, ""};
  const RepresentedInput r = represent(s, RepresentationMode::kMaskedWithEmbedding, &t);
  CHECK(r.tokens == TokenSequence{"a", "xxx", "xxx"});
  REQUIRE(r.skill_vector.has_value());
  CHECK(*r.skill_vector == std::vector<double>{0.5, 0.5});
  CHECK_THROWS_AS(represent(s, RepresentationMode::kMaskedWithEmbedding), ConfigError);
}

TEST_CASE("mode names round-trip") {
  for (auto m : {RepresentationMode::kUnmodified, RepresentationMode::kMasked,
                 RepresentationMode::kMaskedWithEmbedding, RepresentationMode::kTagged}) {
    CHECK(parse_mode(to_string(m)) == m);
  }
  CHECK_THROWS_AS(parse_mode("tag"), ConfigError);
}

TEST_CASE("property: representation invariants") {
  Rng rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const Snippet s = synthetic::random_snippet(rng);
    const auto plain = represent(s, RepresentationMode::kUnmodified).tokens;
    const auto masked = represent(s, RepresentationMode::kMasked).tokens;
    const auto tagged = represent(s, RepresentationMode::kTagged).tokens;
    CHECK(masked.size() == plain.size());
    CHECK(tagged.size() == plain.size() + 2);
    CHECK(std::count(tagged.begin(), tagged.end(), "<begin>") == 1);
    CHECK(std::count(tagged.begin(), tagged.end(), "<end>") == 1);
    CHECK(static_cast<std::size_t>(std::count(masked.begin(), masked.end(), "xxx")) == s.skill.size());
    for (std::size_t k = 0; k < s.skill.size(); ++k) CHECK(masked[s.left.size() + k] == "xxx");
  }
}

}  // TEST_SUITE
