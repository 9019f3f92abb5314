// Command-line surface for the decomposition toolkit: parsing and
// validation of linearized trees, the separator-insertion pipeline,
// training-data corruption, the metric suites, logical-form
// normalization, and dataset statistics.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdt/batch.hpp"
#include "qdt/corruption.hpp"
#include "qdt/dataset.hpp"
#include "qdt/decipher.hpp"
#include "qdt/error.hpp"
#include "qdt/metrics.hpp"
#include "qdt/process_scorer.hpp"
#include "qdt/sexpr.hpp"
#include "qdt/token.hpp"
#include "qdt/tree.hpp"

namespace {

using nlohmann::json;
using namespace qdt;

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(Errc::io_error, "cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void write_report_json(const std::string& path, const json& j) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

struct CommonFlags {
  bool case_sensitive = false;
  bool parallel = false;
  std::string out_path;

  CaseMode mode() const {
    return case_sensitive ? CaseMode::sensitive : CaseMode::insensitive;
  }
};

int cmd_parse(const std::string& in_path, const CommonFlags& flags) {
  Output output(flags.out_path);
  int failures = 0;
  std::size_t line_number = 0;
  for (const std::string& line : read_lines(in_path)) {
    ++line_number;
    try {
      QdtTree tree = parse_linear(tokenize(line));
      json j;
      j["depth"] = depth(tree);
      j["question_nodes"] = count_question_nodes(tree);
      j["description_nodes"] = count_description_nodes(tree);
      j["canonical"] = join(serialize(tree));
      output.stream() << j.dump() << '\n';
    } catch (const Error& e) {
      std::cerr << "line " << line_number << ": " << e.what() << '\n';
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}

int cmd_validate(const std::string& in_path, const std::string& questions_path,
                 const CommonFlags& flags) {
  std::vector<std::string> lines = read_lines(in_path);
  std::vector<std::string> questions;
  if (!questions_path.empty()) {
    questions = read_lines(questions_path);
    if (questions.size() != lines.size()) {
      throw Error(Errc::length_mismatch,
                  "question file does not align with the input");
    }
  }
  std::size_t invalid = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    TokenSeq seq = tokenize(lines[i]);
    std::optional<TokenSeq> original;
    if (!questions.empty()) original = tokenize(questions[i]);
    ValidationReport report =
        validate(seq, original ? &*original : nullptr, flags.mode());
    for (const Issue& issue : report.issues) {
      std::cerr << "line " << i + 1 << " token " << issue.token_index << ": "
                << (issue.severity == Severity::error ? "error" : "warning")
                << ": " << issue.message << '\n';
    }
    if (!report.valid) ++invalid;
  }
  std::cout << lines.size() - invalid << "/" << lines.size() << " valid\n";
  return invalid == 0 ? 0 : 1;
}

struct ClueFile {
  std::vector<TokenSeq> questions;
  std::vector<TokenSeq> clues;
};

ClueFile read_clue_tsv(const std::string& path) {
  ClueFile out;
  std::size_t line_number = 0;
  for (const std::string& line : read_lines(path)) {
    ++line_number;
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(Errc::io_error, path + ":" + std::to_string(line_number) +
                                      ": expected 'question TAB clue'");
    }
    out.questions.push_back(tokenize(line.substr(0, tab)));
    out.clues.push_back(tokenize(line.substr(tab + 1)));
  }
  return out;
}

void print_tree_report(const batch::TreeEvalReport& report, std::ostream& out) {
  out << "examples          " << report.count << '\n'
      << "exact_match       " << report.em << '\n'
      << "tree_depth_acc    " << report.tda << '\n'
      << "ged_mean          " << report.ged_mean << '\n'
      << "ged_normalized    " << report.ged_normalized_mean << '\n'
      << "ged_skipped       " << report.ged_skipped << '\n'
      << "unparseable_preds " << report.unparseable_preds << '\n';
}

json tree_report_json(const batch::TreeEvalReport& report) {
  json j;
  j["count"] = report.count;
  j["em"] = report.em;
  j["tda"] = report.tda;
  j["ged_mean"] = report.ged_mean;
  j["ged_normalized_mean"] = report.ged_normalized_mean;
  j["ged_skipped"] = report.ged_skipped;
  j["unparseable_preds"] = report.unparseable_preds;
  return j;
}

int cmd_decipher(const std::string& clues_path, const std::string& scorer_spec,
                 bool repair, const std::string& gold_path,
                 const CommonFlags& flags) {
  ClueFile input = read_clue_tsv(clues_path);
  MergeOptions merge{repair};

  std::vector<TokenSeq> outputs;
  std::vector<std::string> diagnostics;
  if (scorer_spec.rfind("exec:", 0) == 0) {
    // External scorers hold one exclusive handle; drive them serially.
    ProcessScorer scorer(scorer_spec.substr(5));
    PipelineNotes notes;
    for (std::size_t i = 0; i < input.questions.size(); ++i) {
      try {
        outputs.push_back(decipher(input.questions[i],
                                   Clue{input.clues[i], input.questions[i]},
                                   scorer, merge, &notes));
      } catch (const Error& e) {
        diagnostics.push_back(std::to_string(i) + ": " + e.what());
        outputs.push_back(input.questions[i]);
      }
    }
  } else if (scorer_spec == "align") {
    batch::DecipherBatchResult result =
        flags.parallel
            ? batch::decipher_corpus_parallel(input.questions, input.clues,
                                              flags.mode(), merge)
            : batch::decipher_corpus_serial(input.questions, input.clues,
                                            flags.mode(), merge);
    outputs = std::move(result.outputs);
    diagnostics = std::move(result.diagnostics);
  } else {
    throw CLI::ValidationError("--scorer must be 'align' or 'exec:COMMAND'");
  }

  Output output(flags.out_path);
  for (const TokenSeq& seq : outputs) output.stream() << join(seq) << '\n';
  for (const std::string& diagnostic : diagnostics) {
    std::cerr << "decipher " << diagnostic << '\n';
  }

  if (!gold_path.empty()) {
    std::vector<TokenSeq> golds;
    for (const std::string& line : read_lines(gold_path)) {
      golds.push_back(tokenize(line));
    }
    batch::TreeEvalOptions eval_options;
    eval_options.case_mode = flags.mode();
    batch::TreeEvalReport report =
        batch::evaluate_trees_serial(outputs, golds, eval_options);
    print_tree_report(report, std::cout);
  }
  return diagnostics.empty() ? 0 : 1;
}

CorruptionRates parse_rates(const std::string& spec) {
  CorruptionRates rates;
  if (spec.empty()) return rates;
  double values[4];
  std::size_t start = 0;
  for (int i = 0; i < 4; ++i) {
    std::size_t comma = spec.find(',', start);
    std::string piece = comma == std::string::npos
                            ? spec.substr(start)
                            : spec.substr(start, comma - start);
    try {
      values[i] = std::stod(piece);
    } catch (const std::exception&) {
      throw Error(Errc::invalid_input, "bad rate '" + piece + "'");
    }
    if ((comma == std::string::npos) != (i == 3)) {
      throw Error(Errc::invalid_input,
                  "--rates wants four comma-separated probabilities");
    }
    start = comma + 1;
  }
  rates.replace = values[0];
  rates.erase = values[1];
  rates.insert_after = values[2];
  rates.keep = values[3];
  rates.check();
  return rates;
}

int cmd_corrupt(const std::string& in_path, const std::string& rates_spec,
                std::uint64_t seed, const CommonFlags& flags) {
  LoadResult loaded = load_dataset(std::filesystem::path(in_path));
  for (const std::string& diagnostic : loaded.diagnostics) {
    std::cerr << diagnostic << '\n';
  }
  std::vector<DatasetExample> examples;
  examples.reserve(loaded.records.size());
  for (const QdtRecord& record : loaded.records) {
    examples.push_back(DatasetExample{record.id, tokenize(record.question),
                                      tokenize(record.qdt)});
  }
  CorruptionRates rates = parse_rates(rates_spec);
  TrainingSet set = flags.parallel
                        ? batch::generate_training_set_parallel(examples, rates, seed)
                        : batch::generate_training_set_serial(examples, rates, seed);
  Output output(flags.out_path);
  for (const TrainingRecord& record : set.records) {
    output.stream() << training_record_to_json(record) << '\n';
  }
  for (const std::string& diagnostic : set.diagnostics) {
    std::cerr << diagnostic << '\n';
  }
  return 0;
}

std::vector<TokenSeq> tokenize_lines(const std::string& path) {
  std::vector<TokenSeq> out;
  for (const std::string& line : read_lines(path)) out.push_back(tokenize(line));
  return out;
}

int cmd_eval_tree(const std::string& pred_path, const std::string& gold_path,
                  const CommonFlags& flags) {
  std::vector<TokenSeq> preds = tokenize_lines(pred_path);
  std::vector<TokenSeq> golds = tokenize_lines(gold_path);
  batch::TreeEvalOptions options;
  options.case_mode = flags.mode();
  batch::TreeEvalReport report =
      flags.parallel ? batch::evaluate_trees_parallel(preds, golds, options)
                     : batch::evaluate_trees_serial(preds, golds, options);
  print_tree_report(report, std::cout);
  write_report_json(flags.out_path, tree_report_json(report));
  return 0;
}

int cmd_eval_seq(const std::string& pred_path, const std::string& gold_path,
                 const CommonFlags& flags) {
  std::vector<TokenSeq> preds = tokenize_lines(pred_path);
  std::vector<TokenSeq> golds = tokenize_lines(gold_path);
  batch::SeqEvalReport report =
      flags.parallel ? batch::evaluate_seqs_parallel(preds, golds, flags.mode())
                     : batch::evaluate_seqs_serial(preds, golds, flags.mode());
  std::cout << "examples    " << report.count << '\n'
            << "skipped     " << report.skipped << '\n'
            << "exact_match " << report.em << '\n'
            << "bleu4       " << report.bleu << '\n'
            << "rouge_l     " << report.rouge << '\n';
  json j;
  j["count"] = report.count;
  j["skipped"] = report.skipped;
  j["em"] = report.em;
  j["bleu4"] = report.bleu;
  j["rouge_l"] = report.rouge;
  write_report_json(flags.out_path, j);
  return 0;
}

int cmd_eval_answers(const std::string& pred_path, const std::string& gold_path,
                     const CommonFlags& flags) {
  auto read_sets = [](const std::string& path) {
    std::vector<AnswerSet> sets;
    std::size_t line_number = 0;
    for (const std::string& line : read_lines(path)) {
      ++line_number;
      AnswerSet set;
      if (!line.empty()) {
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_array()) {
          throw Error(Errc::invalid_input,
                      path + ":" + std::to_string(line_number) +
                          ": expected a JSON array of answers");
        }
        for (const auto& answer : j) {
          set.insert(answer.is_string() ? answer.get<std::string>() : answer.dump());
        }
      }
      sets.push_back(std::move(set));
    }
    return sets;
  };
  std::vector<AnswerSet> preds = read_sets(pred_path);
  std::vector<AnswerSet> golds = read_sets(gold_path);
  AnswerSetReport report = answer_set_metrics(preds, golds);
  std::cout << "avg_f1   " << report.avg_f1 << '\n'
            << "acc      " << report.acc << '\n'
            << "macro_p  " << report.macro_p << '\n'
            << "macro_r  " << report.macro_r << '\n'
            << "macro_f1 " << report.macro_f1 << '\n';
  json j;
  j["avg_f1"] = report.avg_f1;
  j["acc"] = report.acc;
  j["macro_p"] = report.macro_p;
  j["macro_r"] = report.macro_r;
  j["macro_f1"] = report.macro_f1;
  write_report_json(flags.out_path, j);
  return 0;
}

int cmd_normalize(const std::string& in_path, const std::string& labels_path,
                  const std::vector<std::string>& entity_prefixes,
                  const CommonFlags& flags) {
  EntityLabelMap labels = EntityLabelMap::load_tsv(labels_path);
  SexprOptions options;
  if (!entity_prefixes.empty()) options.entity_prefixes = entity_prefixes;
  Output output(flags.out_path);
  int failures = 0;
  std::size_t line_number = 0;
  for (const std::string& line : read_lines(in_path)) {
    ++line_number;
    try {
      output.stream() << normalize(parse_sexpr(line, options), labels) << '\n';
    } catch (const Error& e) {
      std::cerr << "line " << line_number << ": " << e.what() << '\n';
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}

int cmd_denormalize(const std::string& in_path, const std::string& labels_path,
                    const std::string& relations_path, const CommonFlags& flags) {
  EntityLabelMap labels = EntityLabelMap::load_tsv(labels_path);
  std::set<std::string> relations;
  for (const std::string& line : read_lines(relations_path)) {
    if (!line.empty()) relations.insert(line);
  }
  Output output(flags.out_path);
  int failures = 0;
  std::size_t line_number = 0;
  for (const std::string& line : read_lines(in_path)) {
    ++line_number;
    try {
      output.stream() << render(denormalize(line, labels, relations)) << '\n';
    } catch (const Error& e) {
      std::cerr << "line " << line_number << ": " << e.what() << '\n';
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}

int cmd_stats(const std::string& in_path, const CommonFlags& flags) {
  LoadResult loaded = load_dataset(std::filesystem::path(in_path));
  for (const std::string& diagnostic : loaded.diagnostics) {
    std::cerr << diagnostic << '\n';
  }
  StatsTable table = stats(loaded.records);
  std::cout << format_stats(table);

  if (!flags.out_path.empty()) {
    json rows = json::object();
    for (std::size_t s = 0; s < 3; ++s) {
      for (std::size_t p = 0; p < 3; ++p) {
        const StatsRow& row = table.cells[s][p];
        if (row.total == 0) continue;
        json entry;
        entry["composition"] = row.composition;
        entry["conjunction"] = row.conjunction;
        entry["both"] = row.both;
        entry["total"] = row.total;
        rows[std::string(source_name(static_cast<Source>(s))) + "/" +
             split_name(static_cast<Split>(p))] = std::move(entry);
      }
    }
    json j;
    j["rows"] = std::move(rows);
    j["total"] = {{"composition", table.total.composition},
                  {"conjunction", table.total.conjunction},
                  {"both", table.total.both},
                  {"total", table.total.total}};
    write_report_json(flags.out_path, j);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Question decomposition trees: pipeline, metrics, and data tools"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string in_path, questions_path, clues_path, gold_path, pred_path;
  std::string labels_path, relations_path, rates_spec, scorer_spec = "align";
  std::vector<std::string> entity_prefixes;
  std::uint64_t seed = 0;
  bool repair = false;

  auto add_common = [&](CLI::App* cmd, bool with_parallel = true) {
    cmd->add_flag("--case-sensitive", flags.case_sensitive,
                  "compare word tokens case-sensitively");
    cmd->add_option("--out", flags.out_path, "write output/report to a file");
    if (with_parallel) {
      cmd->add_flag("--parallel", flags.parallel,
                    "use the OpenMP kernels instead of the serial reference");
    }
  };

  CLI::App* parse_cmd = app.add_subcommand("parse", "parse linearized trees");
  parse_cmd->add_option("--in", in_path, "file of linearizations")->required();
  add_common(parse_cmd, false);

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "check linearizations (and questions)");
  validate_cmd->add_option("--in", in_path, "file of linearizations")->required();
  validate_cmd->add_option("--questions", questions_path,
                           "aligned file of original questions");
  add_common(validate_cmd, false);

  CLI::App* decipher_cmd =
      app.add_subcommand("decipher", "insert separators guided by clues");
  decipher_cmd->add_option("--clues", clues_path, "TSV: question TAB clue")
      ->required();
  decipher_cmd->add_option("--scorer", scorer_spec,
                           "'align' or 'exec:COMMAND' (plug-in protocol)");
  decipher_cmd->add_flag("--repair", repair,
                         "drop unmatched brackets instead of failing");
  decipher_cmd->add_option("--gold", gold_path,
                           "aligned gold linearizations; prints a tree report");
  add_common(decipher_cmd);

  CLI::App* corrupt_cmd =
      app.add_subcommand("corrupt", "generate position-selection training data");
  corrupt_cmd->add_option("--in", in_path, "dataset records (JSON lines)")
      ->required();
  corrupt_cmd->add_option("--seed", seed, "random seed");
  corrupt_cmd->add_option("--rates", rates_spec,
                          "replace,delete,insert,keep (default .01,.01,.01,.97)");
  add_common(corrupt_cmd);

  CLI::App* eval_tree_cmd = app.add_subcommand("eval-tree", "EM / TDA / GED");
  eval_tree_cmd->add_option("--pred", pred_path, "predicted linearizations")
      ->required();
  eval_tree_cmd->add_option("--gold", gold_path, "gold linearizations")->required();
  add_common(eval_tree_cmd);

  CLI::App* eval_seq_cmd =
      app.add_subcommand("eval-seq", "two-sub-question EM / BLEU-4 / ROUGE-L");
  eval_seq_cmd->add_option("--pred", pred_path, "predicted linearizations")
      ->required();
  eval_seq_cmd->add_option("--gold", gold_path, "gold linearizations")->required();
  add_common(eval_seq_cmd);

  CLI::App* eval_answers_cmd =
      app.add_subcommand("eval-answers", "answer-set F1 / accuracy");
  eval_answers_cmd->add_option("--pred", pred_path, "JSON array per line")
      ->required();
  eval_answers_cmd->add_option("--gold", gold_path, "JSON array per line")
      ->required();
  add_common(eval_answers_cmd, false);

  CLI::App* normalize_cmd =
      app.add_subcommand("normalize", "render logical forms with labels");
  normalize_cmd->add_option("--in", in_path, "file of s-expressions")->required();
  normalize_cmd->add_option("--labels", labels_path, "id TAB label map")
      ->required();
  normalize_cmd->add_option("--entity-prefix", entity_prefixes,
                            "entity id prefix (repeatable; default m. g.)");
  add_common(normalize_cmd, false);

  CLI::App* denormalize_cmd =
      app.add_subcommand("denormalize", "recover logical forms from labels");
  denormalize_cmd->add_option("--in", in_path, "file of normalized forms")
      ->required();
  denormalize_cmd->add_option("--labels", labels_path, "id TAB label map")
      ->required();
  denormalize_cmd->add_option("--relations", relations_path,
                              "relation vocabulary, one id per line")
      ->required();
  add_common(denormalize_cmd, false);

  CLI::App* stats_cmd = app.add_subcommand("stats", "dataset statistics table");
  stats_cmd->add_option("--in", in_path, "dataset records (JSON lines)")
      ->required();
  add_common(stats_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (parse_cmd->parsed()) return cmd_parse(in_path, flags);
    if (validate_cmd->parsed()) return cmd_validate(in_path, questions_path, flags);
    if (decipher_cmd->parsed()) {
      return cmd_decipher(clues_path, scorer_spec, repair, gold_path, flags);
    }
    if (corrupt_cmd->parsed()) return cmd_corrupt(in_path, rates_spec, seed, flags);
    if (eval_tree_cmd->parsed()) return cmd_eval_tree(pred_path, gold_path, flags);
    if (eval_seq_cmd->parsed()) return cmd_eval_seq(pred_path, gold_path, flags);
    if (eval_answers_cmd->parsed()) {
      return cmd_eval_answers(pred_path, gold_path, flags);
    }
    if (normalize_cmd->parsed()) {
      return cmd_normalize(in_path, labels_path, entity_prefixes, flags);
    }
    if (denormalize_cmd->parsed()) {
      return cmd_denormalize(in_path, labels_path, relations_path, flags);
    }
    if (stats_cmd->parsed()) return cmd_stats(in_path, flags);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 2;
}
