#include "qdt/dataset.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qdt/error.hpp"
#include "qdt/tree.hpp"

namespace qdt {

const char* source_name(Source source) {
  switch (source) {
    case Source::cwq:
      return "CWQ";
    case Source::lc:
      return "LC";
    case Source::other:
      return "other";
  }
  return "other";
}

const char* split_name(Split split) {
  switch (split) {
    case Split::train:
      return "train";
    case Split::dev:
      return "dev";
    case Split::test:
      return "test";
  }
  return "train";
}

Source parse_source(std::string_view text) {
  if (text == "CWQ" || text == "cwq") return Source::cwq;
  if (text == "LC" || text == "lc") return Source::lc;
  if (text == "other") return Source::other;
  throw Error(Errc::invalid_input, "unknown source '" + std::string(text) + "'");
}

Split parse_split(std::string_view text) {
  if (text == "train") return Split::train;
  if (text == "dev" || text == "valid" || text == "validation") return Split::dev;
  if (text == "test") return Split::test;
  throw Error(Errc::invalid_input, "unknown split '" + std::string(text) + "'");
}

namespace {

bool has_conjunction(const QuestionNode& node) {
  if (node.descriptions.size() >= 2) return true;
  for (const DescriptionNode& desc : node.descriptions) {
    for (const Segment& segment : desc.segments) {
      if (segment.is_inner() && has_conjunction(segment.question())) return true;
    }
  }
  return false;
}

}  // namespace

LoadResult load_dataset(std::istream& in) {
  LoadResult result;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    auto reject = [&](const std::string& why) {
      result.diagnostics.push_back("line " + std::to_string(line_number) + ": " + why);
    };

    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      reject("not a JSON object");
      continue;
    }
    QdtRecord record;
    try {
      record.id = j.at("id").get<std::string>();
      record.source = parse_source(j.at("source").get<std::string>());
      record.split = parse_split(j.at("split").get<std::string>());
      record.question = j.at("question").get<std::string>();
      record.qdt = j.at("qdt").get<std::string>();
    } catch (const std::exception& e) {
      reject(e.what());
      continue;
    }

    TokenSeq question = tokenize(record.question);
    if (question.empty() || !words_only(question)) {
      reject(record.id + ": question must be plain words");
      continue;
    }
    TokenSeq qdt = tokenize(record.qdt);
    ValidationReport report = validate(qdt, &question);
    if (!report.valid) {
      std::string why = record.id + ": invalid linearization";
      for (const Issue& issue : report.issues) {
        if (issue.severity == Severity::error) {
          why += "; " + issue.message;
          break;
        }
      }
      reject(why);
      continue;
    }

    QdtTree tree = parse_linear(qdt);
    record.composition = false;
    for (const Token& token : qdt) {
      if (token.kind == TokenKind::sep_inql) {
        record.composition = true;
        break;
      }
    }
    record.conjunction = has_conjunction(tree.root);

    if (j.contains("comp_types")) {
      bool stored_comp = false;
      bool stored_conj = false;
      for (const auto& entry : j["comp_types"]) {
        std::string kind = entry.get<std::string>();
        if (kind == "composition") stored_comp = true;
        if (kind == "conjunction") stored_conj = true;
      }
      if (stored_comp != record.composition || stored_conj != record.conjunction) {
        result.diagnostics.push_back(
            "line " + std::to_string(line_number) + ": " + record.id +
            ": stored comp_types disagree with the linearization (recomputed)");
      }
    }
    result.records.push_back(std::move(record));
  }
  return result;
}

LoadResult load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::io_error, "cannot open dataset '" + path.string() + "'");
  }
  return load_dataset(in);
}

std::string record_to_json(const QdtRecord& record) {
  nlohmann::ordered_json j;
  j["id"] = record.id;
  j["source"] = source_name(record.source);
  j["split"] = split_name(record.split);
  j["question"] = record.question;
  j["qdt"] = record.qdt;
  nlohmann::ordered_json types = nlohmann::ordered_json::array();
  if (record.composition) types.push_back("composition");
  if (record.conjunction) types.push_back("conjunction");
  j["comp_types"] = std::move(types);
  return j.dump();
}

void save_dataset(const std::filesystem::path& path,
                  std::span<const QdtRecord> records) {
  std::ofstream out(path);
  if (!out) {
    throw Error(Errc::io_error, "cannot write dataset '" + path.string() + "'");
  }
  for (const QdtRecord& record : records) {
    out << record_to_json(record) << '\n';
  }
}

void StatsRow::add(const QdtRecord& record) {
  ++total;
  if (record.composition) ++composition;
  if (record.conjunction) ++conjunction;
  if (record.composition && record.conjunction) ++both;
}

StatsTable stats(std::span<const QdtRecord> records) {
  StatsTable table;
  for (const QdtRecord& record : records) {
    auto s = static_cast<std::size_t>(record.source);
    auto p = static_cast<std::size_t>(record.split);
    table.cells[s][p].add(record);
    table.per_source[s].add(record);
    table.total.add(record);
  }
  return table;
}

std::string format_stats(const StatsTable& table) {
  std::ostringstream out;
  auto row = [&](const std::string& name, const StatsRow& r) {
    out << name;
    for (std::size_t pad = name.size(); pad < 12; ++pad) out << ' ';
    out << '\t' << r.composition << '\t' << r.conjunction << '\t' << r.both
        << '\t' << r.total << '\n';
  };
  out << "Source      \tComp.\tConj.\tComp.&Conj.\tTotal\n";
  for (std::size_t s = 0; s < 3; ++s) {
    if (table.per_source[s].total == 0) continue;
    row(source_name(static_cast<Source>(s)), table.per_source[s]);
    for (std::size_t p = 0; p < 3; ++p) {
      if (table.cells[s][p].total == 0) continue;
      row("  " + std::string(split_name(static_cast<Split>(p))), table.cells[s][p]);
    }
  }
  row("Total", table.total);
  return out.str();
}

}  // namespace qdt
