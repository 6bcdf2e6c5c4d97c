#pragma once

// TREC run and qrels files, rating CSVs, and tabular output.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lexirank/core.hpp"

namespace lexirank {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string_view source, std::size_t line, std::string_view message);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunFile {
  Run run;
  std::vector<std::string> warnings;
};

/// `qid Q0 docid rank score tag` lines. Rankings are ordered by descending
/// score, ties by ascending item id; the rank column is only cross-checked.
RunFile parse_run_stream(std::istream& in, std::int64_t corpus_size,
                         std::string_view source = "<run>");
RunFile parse_run_file(const std::filesystem::path& path, std::int64_t corpus_size);

/// Writes rank i with score (k - i + 1) so a re-parse keeps the order.
void write_run(const Run& run, std::ostream& out);

struct JudgmentFile {
  JudgmentMap judgments;
  std::vector<std::string> warnings;
};

/// `qid iter docid grade` lines; grade >= threshold is relevant. Requests
/// whose grades all fall below the threshold are kept with an empty set.
JudgmentFile parse_qrels_stream(std::istream& in, int threshold = 1,
                                std::string_view source = "<qrels>");
JudgmentFile parse_qrels(const std::filesystem::path& path, int threshold = 1);

/// `user,item,rating` with that header; each user becomes a request.
JudgmentFile parse_ratings_stream(std::istream& in, double threshold = 4.0,
                                  std::string_view source = "<ratings>");
JudgmentFile parse_ratings_csv(const std::filesystem::path& path,
                               double threshold = 4.0);

using Cell = std::variant<std::monostate, std::string, std::int64_t, double>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

enum class TableFormat { tsv, json };

TableFormat parse_table_format(std::string_view text);

/// TSV: header line, %.6g reals, "NA" for missing cells. JSON: an array of
/// objects with full-precision reals and null for missing cells.
void write_table(const Table& table, TableFormat format, std::ostream& out);
void write_table(const Table& table, TableFormat format,
                 const std::filesystem::path& path);

}  // namespace lexirank
