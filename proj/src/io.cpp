#include "lexirank/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace lexirank {

namespace {

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i == line.size()) break;
    const auto start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <class T>
std::optional<T> parse_number(std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

void chomp(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

struct Graded {
  std::string request;
  std::string item;
  bool relevant;
};

JudgmentFile collect_judgments(const std::vector<Graded>& graded,
                               JudgmentSource source) {
  JudgmentFile out;
  std::map<std::string, std::map<std::string, bool>> by_request;
  for (const auto& g : graded) by_request[g.request][g.item] = g.relevant;
  for (auto& [request, items] : by_request) {
    std::set<ItemId> relevant;
    for (const auto& [item, rel] : items) {
      if (rel) relevant.insert(item);
    }
    out.judgments.emplace(request, JudgmentSet(request, std::move(relevant), source));
  }
  return out;
}

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

}  // namespace

ParseError::ParseError(std::string_view source, std::size_t line,
                       std::string_view message)
    : std::runtime_error(std::string(source) + ":" + std::to_string(line) + ": " +
                         std::string(message)),
      line_(line) {}

RunFile parse_run_stream(std::istream& in, std::int64_t corpus_size,
                         std::string_view source) {
  struct Entry {
    std::string item;
    double score;
    std::int64_t rank;
  };
  std::map<std::string, std::vector<Entry>> by_request;
  std::map<std::string, std::map<std::string, std::size_t>> seen;
  RunFile out;
  std::string tag;
  bool mixed_tags = false;

  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    chomp(line);
    const auto fields = split_whitespace(line);
    if (fields.empty()) continue;
    if (fields.size() != 6) {
      throw ParseError(source, number, "expected 6 fields, found " +
                                           std::to_string(fields.size()));
    }
    const auto rank = parse_number<std::int64_t>(fields[3]);
    if (!rank) throw ParseError(source, number, "rank is not an integer");
    const auto score = parse_number<double>(fields[4]);
    if (!score) throw ParseError(source, number, "score is not a number");
    std::string request(fields[0]), item(fields[2]);
    if (auto [it, fresh] = seen[request].emplace(item, number); !fresh) {
      throw ParseError(source, number,
                       "duplicate item '" + item + "' for request '" + request +
                           "' (first on line " + std::to_string(it->second) + ")");
    }
    if (tag.empty()) tag = std::string(fields[5]);
    else if (fields[5] != tag) mixed_tags = true;
    by_request[request].push_back({std::move(item), *score, *rank});
  }
  if (mixed_tags) {
    out.warnings.push_back(std::string(source) +
                           ": several system tags in one file; using '" + tag + "'");
  }
  out.run.tag = tag;
  for (auto& [request, entries] : by_request) {
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.item < b.item;
    });
    std::size_t mismatched = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (entries[i].rank != static_cast<std::int64_t>(i + 1)) ++mismatched;
    }
    if (mismatched) {
      out.warnings.push_back(std::string(source) + ": rank column disagrees with score order for request '" +
                             request + "' (" + std::to_string(mismatched) + " entries)");
    }
    std::vector<ItemId> items;
    items.reserve(entries.size());
    for (auto& e : entries) items.push_back(std::move(e.item));
    out.run.rankings.emplace(request, RankedList(request, std::move(items), corpus_size, tag));
  }
  return out;
}

RunFile parse_run_file(const std::filesystem::path& path, std::int64_t corpus_size) {
  auto in = open_input(path);
  return parse_run_stream(in, corpus_size, path.string());
}

void write_run(const Run& run, std::ostream& out) {
  const std::string tag = run.tag.empty() ? "run" : run.tag;
  for (const auto& [request, ranking] : run.rankings) {
    const auto& items = ranking.items();
    for (std::size_t i = 0; i < items.size(); ++i) {
      out << request << " Q0 " << items[i] << ' ' << (i + 1) << ' '
          << (items.size() - i) << ' ' << tag << '\n';
    }
  }
}

JudgmentFile parse_qrels_stream(std::istream& in, int threshold,
                                std::string_view source) {
  std::vector<Graded> graded;
  std::map<std::pair<std::string, std::string>, std::size_t> seen;
  std::vector<std::string> warnings;
  bool graded_scale = false;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    chomp(line);
    const auto fields = split_whitespace(line);
    if (fields.empty()) continue;
    if (fields.size() != 4) {
      throw ParseError(source, number, "expected 4 fields, found " +
                                           std::to_string(fields.size()));
    }
    const auto grade = parse_number<int>(fields[3]);
    if (!grade) throw ParseError(source, number, "grade is not an integer");
    if (*grade > 1) graded_scale = true;
    std::string request(fields[0]), item(fields[2]);
    if (auto [it, fresh] = seen.emplace(std::pair{request, item}, number); !fresh) {
      warnings.push_back(std::string(source) + ":" + std::to_string(number) +
                         ": duplicate judgment for '" + item + "' in request '" +
                         request + "' overrides line " + std::to_string(it->second));
      it->second = number;
    }
    graded.push_back({std::move(request), std::move(item), *grade >= threshold});
  }
  auto out = collect_judgments(graded, graded_scale || threshold != 1
                                           ? JudgmentSource::binarized_from_grades
                                           : JudgmentSource::binary);
  out.warnings = std::move(warnings);
  return out;
}

JudgmentFile parse_qrels(const std::filesystem::path& path, int threshold) {
  auto in = open_input(path);
  return parse_qrels_stream(in, threshold, path.string());
}

JudgmentFile parse_ratings_stream(std::istream& in, double threshold,
                                  std::string_view source) {
  std::string line;
  std::size_t number = 0;
  bool header = false;
  while (!header && std::getline(in, line)) {
    ++number;
    chomp(line);
    if (trim(line).empty()) continue;
    std::string compact;
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
    }
    if (compact != "user,item,rating") {
      throw ParseError(source, number, "expected header 'user,item,rating'");
    }
    header = true;
  }
  if (!header) throw ParseError(source, number, "missing header 'user,item,rating'");

  std::vector<Graded> graded;
  std::map<std::pair<std::string, std::string>, std::size_t> seen;
  std::vector<std::string> warnings;
  while (std::getline(in, line)) {
    ++number;
    chomp(line);
    if (trim(line).empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (std::size_t comma; (comma = rest.find(',')) != std::string_view::npos;) {
      fields.push_back(trim(rest.substr(0, comma)));
      rest.remove_prefix(comma + 1);
    }
    fields.push_back(trim(rest));
    if (fields.size() != 3) {
      throw ParseError(source, number, "expected 3 comma-separated fields, found " +
                                           std::to_string(fields.size()));
    }
    const auto rating = parse_number<double>(fields[2]);
    if (!rating) throw ParseError(source, number, "rating is not a number");
    std::string user(fields[0]), item(fields[1]);
    if (auto [it, fresh] = seen.emplace(std::pair{user, item}, number); !fresh) {
      warnings.push_back(std::string(source) + ":" + std::to_string(number) +
                         ": duplicate rating for '" + item + "' by '" + user +
                         "' overrides line " + std::to_string(it->second));
      it->second = number;
    }
    graded.push_back({std::move(user), std::move(item), *rating >= threshold});
  }
  auto out = collect_judgments(graded, JudgmentSource::binarized_from_grades);
  out.warnings = std::move(warnings);
  return out;
}

JudgmentFile parse_ratings_csv(const std::filesystem::path& path, double threshold) {
  auto in = open_input(path);
  return parse_ratings_stream(in, threshold, path.string());
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw ValidationError("table row has " + std::to_string(row.size()) +
                          " cells, expected " + std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

TableFormat parse_table_format(std::string_view text) {
  if (text == "tsv") return TableFormat::tsv;
  if (text == "json") return TableFormat::json;
  throw ValidationError("unknown output format '" + std::string(text) + "'");
}

void write_table(const Table& table, TableFormat format, std::ostream& out) {
  if (format == TableFormat::tsv) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      out << (c ? "\t" : "") << table.columns[c];
    }
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out << '\t';
        std::visit(
            [&](const auto& v) {
              using T = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<T, std::monostate>) out << "NA";
              else if constexpr (std::is_same_v<T, double>) out << format_real(v);
              else out << v;
            },
            row[c]);
      }
      out << '\n';
    }
  } else {
    out << "[";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      nlohmann::ordered_json object;
      for (std::size_t c = 0; c < table.columns.size(); ++c) {
        std::visit(
            [&](const auto& v) {
              using T = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<T, std::monostate>) object[table.columns[c]] = nullptr;
              else object[table.columns[c]] = v;
            },
            table.rows[r][c]);
      }
      out << (r ? ",\n " : "\n ") << object.dump();
    }
    out << (table.rows.empty() ? "]\n" : "\n]\n");
  }
  if (!out) throw IoError("failed to write table");
}

void write_table(const Table& table, TableFormat format,
                 const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_table(table, format, out);
  out.flush();
  if (!out) throw IoError("failed to write '" + path.string() + "'");
}

}  // namespace lexirank
