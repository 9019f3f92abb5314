#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qdt/token.hpp"

namespace qdt {

enum class Source { cwq, lc, other };
enum class Split { train, dev, test };

const char* source_name(Source source);
const char* split_name(Split split);
Source parse_source(std::string_view text);
Split parse_split(std::string_view text);

struct QdtRecord {
  std::string id;
  Source source = Source::other;
  Split split = Split::train;
  std::string question;
  std::string qdt;  // linearized
  // Derived from the linearization, never trusted from the file.
  bool composition = false;
  bool conjunction = false;
};

struct LoadResult {
  std::vector<QdtRecord> records;
  std::vector<std::string> diagnostics;  // one line per rejected record
};

// Line-delimited JSON records {"id","source","split","question","qdt"}.
// comp_types, when present, are cross-checked against the recomputed
// values. Invalid records are excluded and reported. Throws
// Error(io_error) only when the file cannot be read.
LoadResult load_dataset(const std::filesystem::path& path);
LoadResult load_dataset(std::istream& in);

void save_dataset(const std::filesystem::path& path,
                  std::span<const QdtRecord> records);
std::string record_to_json(const QdtRecord& record);

struct StatsRow {
  std::size_t composition = 0;
  std::size_t conjunction = 0;
  std::size_t both = 0;
  std::size_t total = 0;

  void add(const QdtRecord& record);
};

struct StatsTable {
  // Indexed [source][split]; aggregate rows alongside.
  std::array<std::array<StatsRow, 3>, 3> cells{};
  std::array<StatsRow, 3> per_source{};
  StatsRow total;
};

StatsTable stats(std::span<const QdtRecord> records);
std::string format_stats(const StatsTable& table);

}  // namespace qdt
