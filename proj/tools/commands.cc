#include "commands.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "softskill/augment.h"
#include "softskill/corpus.h"
#include "softskill/embed.h"
#include "softskill/error.h"
#include "softskill/eval.h"
#include "softskill/lexicon.h"
#include "softskill/log.h"
#include "softskill/matcher.h"
#include "softskill/model.h"
#include "softskill/preprocess.h"
#include "softskill/records.h"
#include "softskill/represent.h"

namespace softskill::cli {
namespace {

using nlohmann::json;

// Output locations and cosmetic switches are not part of the configuration
// identity.
const std::set<std::string> kUnhashedOptions = {"--config", "--quiet", "--help",
                                                "--out", "--log"};

std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void describe_options(const CLI::App& app, std::ostringstream& out) {
  for (const CLI::Option* opt : app.get_options()) {
    const std::string name = opt->get_name();
    if (name.empty() || kUnhashedOptions.contains(name)) continue;
    std::string value;
    if (opt->count() > 0) {
      for (const std::string& r : opt->results()) value += r + ",";
    } else {
      value = opt->get_default_str();
    }
    out << app.get_name() << "." << name << "=" << value << "\n";
  }
}

// Matches every unit of a corpus and calls visit() for each snippet.
// Units containing reserved tokens are skipped with a warning.
struct MatchStats {
  std::size_t units = 0;
  std::size_t matches = 0;
  std::size_t skipped = 0;
};

MatchStats match_corpus(const std::string& path, const CorpusOptions& corpus,
                        const MatchIndex& index, std::size_t window,
                        const std::function<void(Snippet&&)>& visit) {
  MatchStats stats;
  for_each_unit(path, corpus, [&](CorpusUnit&& unit) {
    ++stats.units;
    const TokenSequence tokens = normalize(unit.text);
    if (std::any_of(tokens.begin(), tokens.end(),
                    [](const std::string& t) { return is_reserved_token(t); })) {
      ++stats.skipped;
      log_warning("unit " + unit.source_id + " contains a reserved token; skipped");
      return;
    }
    for (const Match& m : index.find_matches(tokens)) {
      ++stats.matches;
      visit(extract_snippet(tokens, m, window, unit.source_id));
    }
  });
  return stats;
}

std::optional<EmbeddingTable> maybe_embeddings(const std::string& path, std::size_t dim,
                                               std::uint64_t seed) {
  if (path.empty()) return std::nullopt;
  return load_embeddings(path, dim, seed);
}

// Loads embeddings for a model's masked-embed skill vectors, if needed.
std::optional<EmbeddingTable> embeddings_for_model(const ClassifierModel& model,
                                                   const std::string& path,
                                                   std::uint64_t seed) {
  if (model.mode() != RepresentationMode::kMaskedWithEmbedding) {
    return maybe_embeddings(path, model.embedding_dim(), seed);
  }
  if (path.empty()) {
    throw ConfigError("model uses masked-embed; pass --embeddings");
  }
  return load_embeddings(path, model.embedding_dim(), seed);
}

const EmbeddingTable* ptr(const std::optional<EmbeddingTable>& table) {
  return table ? &*table : nullptr;
}

std::vector<Label> require_labels(const std::vector<RepresentedInput>& inputs) {
  std::vector<Label> labels;
  labels.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (!inputs[i].label) {
      throw InputError("record " + std::to_string(i + 1) + " has no label");
    }
    labels.push_back(*inputs[i].label);
  }
  return labels;
}

std::vector<double> score_all(const ClassifierModel& model,
                              const std::vector<RepresentedInput>& inputs) {
  std::vector<double> scores;
  scores.reserve(inputs.size());
  for (const RepresentedInput& in : inputs) {
    scores.push_back(model.predict(in).probability_positive);
  }
  return scores;
}

json report_json(const EvalReport& r) {
  return json{{"precision", r.precision},
              {"recall", r.recall},
              {"f1_weighted", r.f1_weighted},
              {"threshold", r.threshold},
              {"target_precision", r.target_precision},
              {"target_unattained", r.target_unattained},
              {"naive_precision", r.naive_precision},
              {"confusion",
               {{"tp", r.confusion.tp},
                {"fp", r.confusion.fp},
                {"tn", r.confusion.tn},
                {"fn", r.confusion.fn}}}};
}

void write_json_file(const std::string& path, const json& value) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path);
  out << value.dump(2) << '\n';
}

void add_corpus_options(CLI::App* sub, CorpusOptions& corpus) {
  sub->add_option("--text-column", corpus.text_column,
                  "Read a CSV/TSV table with a header row and use this column");
}

}  // namespace

json Globals::meta() const {
  return json{{"tool", "softskill"},
              {"command", command},
              {"seed", seed},
              {"config_hash", config_hash}};
}

std::string effective_config_hash(const CLI::App& app, const CLI::App& sub) {
  std::ostringstream text;
  describe_options(app, text);
  describe_options(sub, text);
  return hex64(fnv1a(text.str()));
}

void register_commands(CLI::App& app, Globals& g, std::function<int()>& action) {
  // lexicon-stats
  {
    auto* sub = app.add_subcommand("lexicon-stats", "Summarize a skill lexicon");
    auto lexicon = std::make_shared<std::string>();
    sub->add_option("--lexicon", *lexicon, "Lexicon TSV (cluster_id<TAB>phrase)")
        ->required();
    sub->callback([&action, lexicon] {
      action = [lexicon] {
        LexiconLoadReport report;
        const SkillLexicon lex = load_lexicon(*lexicon, &report);
        std::cout << "duplicates_collapsed: " << report.duplicates << '\n'
                  << "rejected: " << report.rejected << '\n';
        print_stats(std::cout, compute_stats(lex));
        return kOk;
      };
    });
  }

  // preprocess
  {
    auto* sub = app.add_subcommand("preprocess", "Print the normalized tokens of a text");
    auto text = std::make_shared<std::string>();
    sub->add_option("--text", *text, "Text to normalize")->required();
    sub->callback([&action, text] {
      action = [text] {
        for (const std::string& t : normalize(*text)) std::cout << t << '\n';
        return kOk;
      };
    });
  }

  // match
  {
    struct Args {
      std::string lexicon, input, out;
      std::size_t window = kDefaultWindow;
      CorpusOptions corpus;
    };
    auto args = std::make_shared<Args>();
    auto* sub = app.add_subcommand("match", "Find lexicon phrases and cut context snippets");
    sub->add_option("--lexicon", args->lexicon, "Lexicon TSV")->required();
    sub->add_option("--input", args->input, "Corpus (one document per line)")->required();
    sub->add_option("--out", args->out, "Snippet JSONL output")->required();
    sub->add_option("--window", args->window, "Context tokens per side")->capture_default_str();
    add_corpus_options(sub, args->corpus);
    sub->callback([&action, &g, args] {
      action = [&g, args] {
        const MatchIndex index(load_lexicon(args->lexicon));
        JsonlWriter writer(args->out, g.meta());
        const MatchStats stats = match_corpus(
            args->input, args->corpus, index, args->window,
            [&](Snippet&& s) { writer.write(snippet_to_json(s)); });
        writer.close();
        log_info("units: " + std::to_string(stats.units) +
                 ", matches: " + std::to_string(stats.matches) +
                 ", skipped: " + std::to_string(stats.skipped));
        return kOk;
      };
    });
  }

  // transform
  {
    struct Args {
      std::string mode, in, out, embeddings;
      std::size_t dim = 100;
    };
    auto args = std::make_shared<Args>();
    auto* sub = app.add_subcommand("transform", "Build classifier inputs from snippets");
    sub->add_option("--mode", args->mode, "unmodified|masked|masked-embed|tagged")->required();
    sub->add_option("--in", args->in, "Snippet JSONL")->required();
    sub->add_option("--out", args->out, "Input JSONL output")->required();
    sub->add_option("--embeddings", args->embeddings, "Word vector text file");
    sub->add_option("--dim", args->dim, "Embedding dimension")->capture_default_str();
    sub->callback([&action, &g, args] {
      action = [&g, args] {
        const RepresentationMode mode = parse_mode(args->mode);
        const auto table = maybe_embeddings(args->embeddings, args->dim, g.seed);
        std::vector<std::optional<Label>> labels;
        const std::vector<Snippet> snippets = read_snippets(args->in, &labels);
        JsonlWriter writer(args->out, g.meta());
        for (std::size_t i = 0; i < snippets.size(); ++i) {
          RepresentedInput in = represent(snippets[i], mode, ptr(table));
          in.label = labels[i];
          writer.write(input_to_json(in));
        }
        writer.close();
        return kOk;
      };
    });
  }

  // augment
  {
    struct Args {
      std::string annotations, snippets, out;
      double neg_ratio = kDefaultNegativeRatio;
      std::size_t limit = 15000;
      std::vector<std::string> exclude = default_exclusion_phrases();
    };
    auto args = std::make_shared<Args>();
    auto* sub = app.add_subcommand("augment", "Mine weakly labeled snippets from seed skills");
    sub->add_option("--annotations", args->annotations, "Annotation JSONL")->required();
    sub->add_option("--corpus-snippets", args->snippets, "Snippet JSONL from `match`")
        ->required();
    sub->add_option("--neg-ratio", args->neg_ratio,
                    "Negative seed if non-candidate vote share exceeds this")
        ->capture_default_str();
    sub->add_option("--limit", args->limit, "Snippets per polarity")->capture_default_str();
    sub->add_option("--exclude", args->exclude,
                    "Context phrases that veto a negative snippet")
        ->capture_default_str();
    sub->add_option("--out", args->out, "Labeled snippet JSONL output")->required();
    sub->callback([&action, &g, args] {
      action = [&g, args] {
        const auto annotations = read_annotations(args->annotations);
        const SeedSkills seeds = select_seed_skills(annotations, args->neg_ratio);
        const std::vector<Snippet> snippets = read_snippets(args->snippets);
        const auto negatives = mine_weak_labels(snippets, seeds.negative, Label::kNegative,
                                                args->exclude, args->limit);
        const auto positives = mine_weak_labels(snippets, seeds.positive, Label::kPositive,
                                                args->exclude, args->limit);
        JsonlWriter writer(args->out, g.meta());
        for (const auto* group : {&negatives, &positives}) {
          for (const LabeledSnippet& ls : *group) {
            writer.write(snippet_to_json(ls.snippet, ls.label));
          }
        }
        writer.close();
        std::cout << "negative_seed_skills: " << seeds.negative.size() << '\n'
                  << "positive_seed_skills: " << seeds.positive.size() << '\n'
                  << "negative_snippets: " << negatives.size() << '\n'
                  << "positive_snippets: " << positives.size() << '\n';
        return kOk;
      };
    });
  }

  // train
  {
    struct Args {
      std::string model = "lstm", mode = "tagged", train, embeddings, out, log;
      std::size_t dim = 100;
      TrainConfig defaults;
      std::optional<double> dropout;
      double lr = 0.001;
      std::size_t batch_size = 16, epochs = 100, patience = 5, hidden = 100,
                  filters = 50, max_doc_len = 30;
      std::vector<std::size_t> widths = {2, 3, 4};
      double forget_bias = 1.0;
    };
    auto args = std::make_shared<Args>();
    auto* sub = app.add_subcommand("train", "Train a disambiguation classifier");
    sub->add_option("--model", args->model, "mean-logistic|cnn|lstm")->capture_default_str();
    sub->add_option("--mode", args->mode, "unmodified|masked|masked-embed|tagged")
        ->capture_default_str();
    sub->add_option("--train", args->train, "Labeled snippet or input JSONL")->required();
    sub->add_option("--embeddings", args->embeddings, "Word vector text file");
    sub->add_option("--dim", args->dim, "Embedding dimension")->capture_default_str();
    sub->add_option("--out", args->out, "Checkpoint output")->required();
    sub->add_option("--log", args->log, "Write the per-epoch training log as JSON");
    sub->add_option("--lr", args->lr, "Adam learning rate")->capture_default_str();
    sub->add_option("--batch-size", args->batch_size)->capture_default_str();
    sub->add_option("--epochs", args->epochs, "Maximum epochs")->capture_default_str();
    sub->add_option("--patience", args->patience, "Early-stopping patience")
        ->capture_default_str();
    sub->add_option("--dropout", args->dropout, "Default: 0.5 cnn, 0.2 lstm");
    sub->add_option("--hidden", args->hidden, "LSTM hidden size")->capture_default_str();
    sub->add_option("--filters", args->filters, "CNN filters per width")->capture_default_str();
    sub->add_option("--filter-widths", args->widths, "CNN filter widths")->capture_default_str();
    sub->add_option("--max-doc-len", args->max_doc_len, "CNN input length")
        ->capture_default_str();
    sub->add_option("--forget-bias", args->forget_bias, "LSTM forget-gate bias init")
        ->capture_default_str();
    sub->callback([&action, &g, args] {
      action = [&g, args] {
        TrainConfig config =
            TrainConfig::for_model(parse_model_kind(args->model), parse_mode(args->mode));
        if (args->dropout) config.dropout = *args->dropout;
        config.learning_rate = args->lr;
        config.batch_size = args->batch_size;
        config.max_epochs = args->epochs;
        config.patience = args->patience;
        config.hidden_size = args->hidden;
        config.filters_per_width = args->filters;
        config.filter_widths = args->widths;
        config.max_doc_len = args->max_doc_len;
        config.forget_bias_init = args->forget_bias;
        config.embedding_dim = args->dim;
        config.seed = g.seed;
        config.validate();

        const auto table = maybe_embeddings(args->embeddings, args->dim, g.seed);
        const auto data = read_inputs(args->train, config.mode, ptr(table));
        TrainResult result = train(data, config, ptr(table));
        result.model.set_provenance(g.meta().dump());
        save_model(result.model, args->out);

        const TrainingLog& log = result.log;
        std::cout << std::fixed << std::setprecision(4)
                  << "train_size: " << log.train_size << '\n'
                  << "validation_size: " << log.validation_size << '\n'
                  << "epochs_run: " << log.epochs.size() << '\n'
                  << "best_epoch: " << log.best_epoch << '\n'
                  << "best_validation_f1_weighted: " << log.best_validation_f1 << '\n'
                  << "best_validation_accuracy: " << log.best_validation_accuracy << '\n';
        if (!args->log.empty()) {
          json epochs = json::array();
          for (const EpochRecord& e : log.epochs) {
            epochs.push_back({{"epoch", e.epoch},
                              {"train_loss", e.train_loss},
                              {"validation_f1_weighted", e.validation_f1},
                              {"validation_accuracy", e.validation_accuracy}});
          }
          write_json_file(args->log, {{"meta", g.meta()},
                                      {"best_epoch", log.best_epoch},
                                      {"stopped_early", log.stopped_early},
                                      {"epochs", epochs}});
        }
        return kOk;
      };
    });
  }

  // evaluate
  {
    struct Args {
      std::string model, test, embeddings, out;
      double target = 0.95;
    };
    auto args = std::make_shared<Args>();
    auto* sub = app.add_subcommand("evaluate",
                                   "Calibrate to a precision target and report metrics");
    sub->add_option("--model", args->model, "Checkpoint")->required();
    sub->add_option("--test", args->test, "Labeled snippet or input JSONL")->required();
    sub->add_option("--target-precision", args->target)->capture_default_str();
    sub->add_option("--embeddings", args->embeddings, "Needed for masked-embed models");
    sub->add_option("--out", args->out, "Also write the report as JSON");
    sub->callback([&action, &g, args] {
      action = [&g, args] {
        const ClassifierModel model = load_model(args->model);
        const auto table = embeddings_for_model(model, args->embeddings, g.seed);
        const auto inputs = read_inputs(args->test, model.mode(), ptr(table));
        const std::vector<Label> labels = require_labels(inputs);
        const EvalReport report =
            evaluate_scores(score_all(model, inputs), labels, args->target);
        print_report(std::cout, report);
        if (!args->out.empty()) {
          write_json_file(args->out, {{"meta", g.meta()}, {"report", report_json(report)}});
        }
        return kOk;
      };
    });
  }

  // calibrate
  {
    struct Args {
      std::string model, data, scores, embeddings, out;
      double target = 0.95;
    };
    auto args = std::make_shared<Args>();
    auto* sub = app.add_subcommand("calibrate",
                                   "Find the decision threshold for a precision target");
    sub->add_option("--model", args->model, "Checkpoint (with --data)");
    sub->add_option("--data", args->data, "Labeled snippet or input JSONL");
    sub->add_option("--scores", args->scores, "TSV of `score<TAB>label` lines instead");
    sub->add_option("--target-precision", args->target)->capture_default_str();
    sub->add_option("--embeddings", args->embeddings, "Needed for masked-embed models");
    sub->add_option("--out", args->out, "Also write the result as JSON");
    sub->callback([&action, &g, args] {
      action = [&g, args] {
        std::vector<double> scores;
        std::vector<Label> labels;
        if (!args->scores.empty()) {
          std::ifstream in(args->scores);
          if (!in) throw InputError("cannot open " + args->scores);
          std::string line;
          for (std::size_t n = 1; std::getline(in, line); ++n) {
            if (line.empty() || line[0] == '#') continue;
            const std::size_t tab = line.find('\t');
            if (tab == std::string::npos) throw ParseError(args->scores, n, "expected score<TAB>label");
            try {
              scores.push_back(std::stod(line.substr(0, tab)));
            } catch (const std::exception&) {
              throw ParseError(args->scores, n, "bad score");
            }
            std::string label = line.substr(tab + 1);
            if (!label.empty() && label.back() == '\r') label.pop_back();
            labels.push_back(parse_label(label));
          }
        } else if (!args->model.empty() && !args->data.empty()) {
          const ClassifierModel model = load_model(args->model);
          const auto table = embeddings_for_model(model, args->embeddings, g.seed);
          const auto inputs = read_inputs(args->data, model.mode(), ptr(table));
          labels = require_labels(inputs);
          scores = score_all(model, inputs);
        } else {
          throw ConfigError("calibrate needs --scores, or --model with --data");
        }
        const Calibration cal = calibrate_threshold(scores, labels, args->target);
        std::cout << std::setprecision(6) << "threshold: " << cal.threshold << '\n'
                  << std::fixed << std::setprecision(2)
                  << "precision: " << 100.0 * cal.precision << '\n'
                  << "recall: " << 100.0 * cal.recall << '\n'
                  << "target_unattained: " << (cal.target_unattained ? "true" : "false")
                  << '\n';
        if (!args->out.empty()) {
          write_json_file(args->out, {{"meta", g.meta()},
                                      {"threshold", cal.threshold},
                                      {"precision", cal.precision},
                                      {"recall", cal.recall},
                                      {"target_precision", args->target},
                                      {"target_unattained", cal.target_unattained}});
        }
        return kOk;
      };
    });
  }

  // disambiguate
  {
    struct Args {
      std::string lexicon, model, input, embeddings, out;
      double threshold = 0.5;
      std::size_t window = kDefaultWindow;
      CorpusOptions corpus;
    };
    auto args = std::make_shared<Args>();
    auto* sub = app.add_subcommand(
        "disambiguate", "Match a corpus and keep the matches that describe the candidate");
    sub->add_option("--lexicon", args->lexicon, "Lexicon TSV")->required();
    sub->add_option("--model", args->model, "Checkpoint")->required();
    sub->add_option("--input", args->input, "Corpus")->required();
    sub->add_option("--threshold", args->threshold, "Keep matches scoring at least this")
        ->capture_default_str();
    sub->add_option("--window", args->window)->capture_default_str();
    sub->add_option("--embeddings", args->embeddings, "Needed for masked-embed models");
    sub->add_option("--out", args->out, "Annotated snippet JSONL output")->required();
    add_corpus_options(sub, args->corpus);
    sub->callback([&action, &g, args] {
      action = [&g, args] {
        const ClassifierModel model = load_model(args->model);
        const auto table = embeddings_for_model(model, args->embeddings, g.seed);
        const MatchIndex index(load_lexicon(args->lexicon));
        JsonlWriter writer(args->out, g.meta());
        match_corpus(args->input, args->corpus, index, args->window, [&](Snippet&& s) {
          const double p =
              model.predict(represent(s, model.mode(), ptr(table))).probability_positive;
          json record = snippet_to_json(s);
          record["probability"] = p;
          record["keep"] = p >= args->threshold;
          writer.write(record);
        });
        writer.close();
        return kOk;
      };
    });
  }

  // filter-report
  {
    struct Args {
      std::string lexicon, model, corpus_path, embeddings, out;
      double threshold = 0.5;
      std::size_t window = kDefaultWindow;
      std::size_t max_skill_length = 0;
      CorpusOptions corpus;
    };
    auto args = std::make_shared<Args>();
    auto* sub = app.add_subcommand("filter-report",
                                   "Per-skill match counts before and after filtering");
    sub->add_option("--lexicon", args->lexicon, "Lexicon TSV")->required();
    sub->add_option("--model", args->model, "Checkpoint")->required();
    sub->add_option("--corpus", args->corpus_path, "Corpus")->required();
    sub->add_option("--threshold", args->threshold)->capture_default_str();
    sub->add_option("--window", args->window)->capture_default_str();
    sub->add_option("--max-skill-length", args->max_skill_length,
                    "Only count skills with at most this many tokens (0: all)")
        ->capture_default_str();
    sub->add_option("--embeddings", args->embeddings, "Needed for masked-embed models");
    sub->add_option("--out", args->out, "TSV output")->required();
    add_corpus_options(sub, args->corpus);
    sub->callback([&action, &g, args] {
      action = [&g, args] {
        const ClassifierModel model = load_model(args->model);
        const auto table = embeddings_for_model(model, args->embeddings, g.seed);
        const SkillLexicon lex = load_lexicon(args->lexicon);
        const MatchIndex index(lex);
        std::vector<Snippet> snippets;
        match_corpus(args->corpus_path, args->corpus, index, args->window, [&](Snippet&& s) {
          if (args->max_skill_length == 0 || s.skill.size() <= args->max_skill_length) {
            snippets.push_back(std::move(s));
          }
        });
        const FilterReport report = filter_report(snippets, model, args->threshold, ptr(table));

        std::ofstream out(args->out, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write " + args->out);
        out << "# " << g.meta().dump() << '\n'
            << "skill_id\tskill_text\traw_count\tfiltered_count\tremoved\n";
        for (const FilterRecord& r : report) {
          out << r.skill_id << '\t' << lex.phrase(r.skill_id).raw_text << '\t' << r.raw_count
              << '\t' << r.filtered_count << '\t' << (r.raw_count - r.filtered_count) << '\n';
        }
        if (!out) throw InputError("failed writing " + args->out);
        return kOk;
      };
    });
  }

  // gradient-check
  {
    struct Args {
      std::string model = "lstm", mode = "tagged";
    };
    auto args = std::make_shared<Args>();
    auto* sub = app.add_subcommand(
        "gradient-check", "Compare backpropagation with finite differences");
    sub->add_option("--model", args->model, "mean-logistic|cnn|lstm")->capture_default_str();
    sub->add_option("--mode", args->mode)->capture_default_str();
    sub->callback([&action, &g, args] {
      action = [&g, args] {
        const ModelKind kind = parse_model_kind(args->model);
        const GradientCheckResult r = gradient_check(kind, parse_mode(args->mode), g.seed);
        const double tolerance = kind == ModelKind::kMeanLogistic ? 1e-6 : 1e-4;
        const bool pass = r.max_relative_error < tolerance;
        std::cout << std::scientific << std::setprecision(3)
                  << "max_relative_error: " << r.max_relative_error << '\n'
                  << "tolerance: " << tolerance << '\n'
                  << "worst_parameter: " << r.worst_parameter << '[' << r.worst_index << "]\n"
                  << "checked: " << r.checked << '\n'
                  << "status: " << (pass ? "pass" : "fail") << '\n';
        return pass ? kOk : kInternal;
      };
    });
  }
}

}  // namespace softskill::cli
