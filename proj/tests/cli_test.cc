#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>

#include "softskill/records.h"
#include "synthetic.h"
#include "test_util.h"

#ifndef SOFTSKILL_CLI_PATH
#error "SOFTSKILL_CLI_PATH must point at the softskill binary"
#endif

using namespace softskill;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') q += "'\\''";
    else q += c;
  }
  return q + "'";
}

Run cli(const testutil::TempDir& dir, const std::string& args) {
  const auto out = dir / "stdout.txt";
  const std::string cmd = quote(SOFTSKILL_CLI_PATH) + " " + args + " > " + quote(out.string()) +
                          " 2> " + quote((dir / "stderr.txt").string());
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = testutil::read_file(out);
  return r;
}

std::string p(const testutil::TempDir& dir, const std::string& name) {
  return quote((dir / name).string());
}

// Writes a labeled snippet file from the synthetic data set.
void write_training_data(const testutil::TempDir& dir, std::size_t n) {
  const synthetic::Dataset d = synthetic::skill_identity_dataset(n, 4, 5);
  JsonlWriter w(dir / "train.jsonl", {{"tool", "test"}});
  for (std::size_t i = 0; i < n; ++i) w.write(snippet_to_json(d.snippets[i], d.labels[i]));
  w.close();
  std::string vectors;
  for (const std::string& word : d.table.words()) {
    vectors += word;
    for (double x : d.table.lookup(word)) vectors += " " + std::to_string(x);
    vectors += "\n";
  }
  testutil::write_file(dir / "vec.txt", vectors);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit 1") {
  testutil::TempDir dir("cli");
  CHECK(cli(dir, "").code == 1);
  CHECK(cli(dir, "nonsense").code == 1);
  CHECK(cli(dir, "lexicon-stats").code == 1);
  CHECK(cli(dir, "train --train x --out y --mode sideways").code == 1);
  CHECK(cli(dir, "--help").code == 0);
}

TEST_CASE("data errors exit 2") {
  testutil::TempDir dir("cli");
  CHECK(cli(dir, "lexicon-stats --lexicon " + p(dir, "missing.tsv")).code == 2);
  testutil::write_file(dir / "bad.tsv", "1\tok\nbroken\n");
  CHECK(cli(dir, "lexicon-stats --lexicon " + p(dir, "bad.tsv")).code == 2);
  testutil::write_file(dir / "garbage.ckpt", "not a checkpoint");
  testutil::write_file(dir / "t.jsonl", "");
  CHECK(cli(dir, "evaluate --model " + p(dir, "garbage.ckpt") + " --test " + p(dir, "t.jsonl")).code == 2);
}

TEST_CASE("preprocess and lexicon-stats") {
  testutil::TempDir dir("cli");
  const Run r = cli(dir, "preprocess --text 'Strong Abilities, teamwork'");
  CHECK(r.code == 0);
  CHECK(r.out == "strong\nability\n,\nteamwork\n");
  testutil::write_file(dir / "lex.tsv", "1\tteam player\n1\tteam players\n2\tgrit\n");
  const Run s = cli(dir, "lexicon-stats --lexicon " + p(dir, "lex.tsv"));
  CHECK(s.code == 0);
  CHECK(s.out.find("duplicates_collapsed: 1") != std::string::npos);
  CHECK(s.out.find("phrase_count: 2") != std::string::npos);
}

TEST_CASE("match, transform and augment pipeline") {
  testutil::TempDir dir("cli");
  testutil::write_file(dir / "lex.tsv", "1\tteam player\n2\tcommunication skills\n3\tgrit\n");
  testutil::write_file(dir / "corpus.txt",
                       "The candidate is a team player. Our team player culture!\n"
                       "Excellent communication skills \xE2\x80\xA2 grit\n"
                       "This line mentions xxx so it is skipped. grit\n");
  REQUIRE(cli(dir, "match --lexicon " + p(dir, "lex.tsv") + " --input " + p(dir, "corpus.txt") +
                       " --out " + p(dir, "s.jsonl") + " --window 3").code == 0);
  const auto snippets = read_snippets(dir / "s.jsonl");
  REQUIRE(snippets.size() == 5);
  CHECK(snippets[0].source_id == "0:0");
  CHECK(snippets[0].left == TokenSequence{"candidate", "is", "a"});
  CHECK(snippets[2].skill == TokenSequence{"communication", "skill"});
  CHECK(snippets[4].source_id == "2:1");

  REQUIRE(cli(dir, "transform --mode tagged --in " + p(dir, "s.jsonl") + " --out " + p(dir, "i.jsonl")).code == 0);
  const auto inputs = read_inputs(dir / "i.jsonl", RepresentationMode::kTagged, nullptr);
  REQUIRE(inputs.size() == 5);
  CHECK(inputs[3].tokens == TokenSequence{"<begin>", "grit", "<end>"});

  testutil::write_file(dir / "ann.jsonl",
                       "{\"source_id\":\"0:1\",\"skill_id\":0,\"votes_positive\":0,\"votes_negative\":3}\n"
                       "{\"source_id\":\"1:1\",\"skill_id\":2,\"votes_positive\":3,\"votes_negative\":0}\n");
  const Run a = cli(dir, "augment --annotations " + p(dir, "ann.jsonl") + " --corpus-snippets " +
                             p(dir, "s.jsonl") + " --out " + p(dir, "weak.jsonl"));
  REQUIRE(a.code == 0);
  std::vector<std::optional<Label>> labels;
  const auto weak = read_snippets(dir / "weak.jsonl", &labels);
  // The first team-player snippet has "candidate" in its context.
  REQUIRE(weak.size() == 3);
  CHECK(weak[0].source_id == "0:1");
  CHECK(labels[0] == Label::kNegative);
  CHECK(labels[1] == Label::kPositive);
}

TEST_CASE("train, evaluate, calibrate, disambiguate, filter-report") {
  testutil::TempDir dir("cli");
  write_training_data(dir, 120);
  const std::string common = "--model mean-logistic --mode tagged --embeddings " + p(dir, "vec.txt") +
                             " --dim 4 --epochs 5 --train " + p(dir, "train.jsonl");
  const Run t = cli(dir, "train " + common + " --out " + p(dir, "m.ckpt") + " --log " + p(dir, "log.json"));
  REQUIRE(t.code == 0);
  CHECK(t.out.find("train_size: 60") != std::string::npos);
  CHECK(testutil::read_file(dir / "log.json").find("\"epochs\"") != std::string::npos);

  const Run e = cli(dir, "evaluate --model " + p(dir, "m.ckpt") + " --test " + p(dir, "train.jsonl") +
                             " --out " + p(dir, "report.json"));
  CHECK(e.code == 0);
  CHECK(e.out.find("recall") != std::string::npos);

  const Run c = cli(dir, "calibrate --model " + p(dir, "m.ckpt") + " --data " + p(dir, "train.jsonl"));
  CHECK(c.code == 0);
  CHECK(c.out.find("threshold: ") == 0);

  testutil::write_file(dir / "scores.tsv", "0.9\tpositive\n0.8\t0\n0.3\t1\n0.1\tnegative\n");
  const Run s = cli(dir, "calibrate --scores " + p(dir, "scores.tsv") + " --target-precision 0.6");
  CHECK(s.code == 0);
  CHECK(s.out.find("threshold: 0.2") != std::string::npos);
  CHECK(cli(dir, "calibrate").code == 1);

  testutil::write_file(dir / "lex.tsv", "1\tpos0\n2\tneg0\n");
  testutil::write_file(dir / "corpus.txt", "ctx1 pos0 ctx2. ctx3 neg0 ctx4\nctx5 pos0\n");
  REQUIRE(cli(dir, "disambiguate --lexicon " + p(dir, "lex.tsv") + " --model " + p(dir, "m.ckpt") +
                       " --input " + p(dir, "corpus.txt") + " --out " + p(dir, "d.jsonl")).code == 0);
  int lines = 0;
  read_jsonl(dir / "d.jsonl", [&](const nlohmann::json& j, std::size_t) {
    CHECK(j.contains("probability"));
    CHECK(j.at("keep").get<bool>() == (j.at("probability").get<double>() >= 0.5));
    ++lines;
  });
  CHECK(lines == 3);

  REQUIRE(cli(dir, "filter-report --lexicon " + p(dir, "lex.tsv") + " --model " + p(dir, "m.ckpt") +
                       " --corpus " + p(dir, "corpus.txt") + " --out " + p(dir, "f.tsv")).code == 0);
  const std::string report = testutil::read_file(dir / "f.tsv");
  CHECK(report.rfind("# ", 0) == 0);
  CHECK(report.find("config_hash") != std::string::npos);
  CHECK(report.find("\tpos0\t2\t") != std::string::npos);
  CHECK(report.find("\tneg0\t1\t") != std::string::npos);
}

TEST_CASE("masked-embed models need embeddings at evaluation") {
  testutil::TempDir dir("cli");
  write_training_data(dir, 60);
  REQUIRE(cli(dir, "train --model mean-logistic --mode masked-embed --embeddings " + p(dir, "vec.txt") +
                       " --dim 4 --epochs 2 --train " + p(dir, "train.jsonl") + " --out " + p(dir, "m.ckpt"))
              .code == 0);
  CHECK(cli(dir, "evaluate --model " + p(dir, "m.ckpt") + " --test " + p(dir, "train.jsonl")).code == 1);
  CHECK(cli(dir, "evaluate --model " + p(dir, "m.ckpt") + " --test " + p(dir, "train.jsonl") +
                     " --embeddings " + p(dir, "vec.txt")).code == 0);
}

TEST_CASE("config file supplies options and flags override it") {
  testutil::TempDir dir("cli");
  write_training_data(dir, 60);
  testutil::write_file(dir / "run.toml", "[train]\nmodel = \"mean-logistic\"\nmode = \"masked\"\nepochs = 2\n");
  const std::string base = "--config " + p(dir, "run.toml") + " train --dim 4 --embeddings " +
                           p(dir, "vec.txt") + " --train " + p(dir, "train.jsonl");
  const Run a = cli(dir, base + " --out " + p(dir, "a.ckpt"));
  REQUIRE(a.code == 0);
  CHECK(a.out.find("epochs_run: 2") != std::string::npos);
  const Run b = cli(dir, base + " --epochs 1 --out " + p(dir, "b.ckpt"));
  REQUIRE(b.code == 0);
  CHECK(b.out.find("epochs_run: 1") != std::string::npos);
}

TEST_CASE("gradient-check command") {
  testutil::TempDir dir("cli");
  const Run r = cli(dir, "gradient-check --model mean-logistic --mode tagged");
  CHECK(r.code == 0);
  CHECK(r.out.find("status: pass") != std::string::npos);
}

}  // TEST_SUITE
