// Copyright 2026 The mqscan Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mqscan/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

namespace mqscan {

namespace {

std::string location(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Splits one CSV line; double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_csv(std::string_view line, std::string_view source,
                                   std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && trim(cur).empty()) {
      cur.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? cur : std::string(trim(cur)));
      cur.clear();
      was_quoted = false;
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) throw DataError(location(source, line_no) + ": unterminated quote");
  fields.push_back(was_quoted ? cur : std::string(trim(cur)));
  return fields;
}

double parse_feature(const std::string& text, std::string_view source,
                     std::size_t line_no, const std::string& column) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (text.empty() || res.ec != std::errc{} || res.ptr != last) {
    throw DataError(location(source, line_no) + ": column '" + column +
                    "': cannot parse '" + text + "' as a number");
  }
  if (!std::isfinite(v)) {
    throw DataError(location(source, line_no) + ": column '" + column +
                    "': non-finite value '" + text + "'");
  }
  return v;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string optional_k(const std::optional<std::size_t>& k) {
  return k ? std::to_string(*k) : std::string();
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Corpus parse_corpus(std::istream& in, const CorpusOptions& options,
                    std::string_view source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_csv(line, source, line_no);
      break;
    }
  }
  if (header.empty()) throw DataError(std::string(source) + ": missing header row");

  std::optional<std::size_t> id_col;
  std::optional<std::size_t> label_col;
  Corpus corpus;
  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == options.id_column && !id_col) {
      id_col = c;
    } else if (header[c] == options.label_column && !label_col) {
      label_col = c;
    } else {
      feature_cols.push_back(c);
      corpus.feature_names.push_back(header[c]);
    }
  }
  if (!label_col) {
    throw DataError(std::string(source) + ": header has no '" +
                    options.label_column + "' column");
  }
  if (feature_cols.empty()) {
    throw DataError(std::string(source) + ": header has no feature columns");
  }

  std::unordered_set<std::string> ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_csv(line, source, line_no);
    if (fields.size() != header.size()) {
      throw DataError(location(source, line_no) + ": expected " +
                      std::to_string(header.size()) + " columns, found " +
                      std::to_string(fields.size()));
    }
    VectorRecord r;
    r.id = id_col ? fields[*id_col] : std::to_string(corpus.records.size());
    if (r.id.empty()) throw DataError(location(source, line_no) + ": empty id");
    if (!ids.insert(r.id).second) {
      throw DataError(location(source, line_no) + ": duplicate id '" + r.id + "'");
    }
    r.label = std::move(fields[*label_col]);
    r.values.reserve(feature_cols.size());
    for (std::size_t c : feature_cols) {
      r.values.push_back(parse_feature(fields[c], source, line_no, header[c]));
    }
    corpus.records.push_back(std::move(r));
  }
  if (corpus.records.empty()) {
    throw DataError(std::string(source) + ": no data rows");
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path,
                   const CorpusOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file '" + path.string() + "'");
  return parse_corpus(in, options, path.string());
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  out << "id,label";
  for (const auto& name : corpus.feature_names) out << ',' << csv_field(name);
  out << '\n';
  for (const auto& r : corpus.records) {
    out << csv_field(r.id) << ',' << csv_field(r.label.value_or(""));
    for (double v : r.values) out << ',' << format_double(v);
    out << '\n';
  }
}

std::string runs_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "method,m,run,run_seed,k,retrieved_count,positives,precision,recall\n";
  for (const auto& r : report.rows) {
    out << method_name(r.method) << ',' << r.m << ',' << r.run << ','
        << r.run_seed << ',' << optional_k(r.k) << ',' << r.retrieved_count
        << ',' << r.positives << ',' << format_double(r.precision) << ','
        << format_double(r.recall) << '\n';
  }
  return out.str();
}

std::string aggregates_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "method,m,k,runs,mean_p,std_p,mean_r,std_r,mean_retrieved\n";
  for (const auto& a : report.aggregates) {
    out << method_name(a.method) << ',' << a.m << ',' << optional_k(a.k) << ','
        << a.runs << ',' << format_double(a.mean_precision) << ','
        << format_double(a.std_precision) << ',' << format_double(a.mean_recall)
        << ',' << format_double(a.std_recall) << ','
        << format_double(a.mean_retrieved) << '\n';
  }
  return out.str();
}

std::string scan_result_json(const ScanResult& result, const QuerySet& queries) {
  nlohmann::ordered_json doc;
  doc["dims"] = result.dims;
  doc["alpha_star"] = result.alpha_star;
  doc["score"] = result.score;
  doc["retrieved_count"] = result.retrieved_ids.size();
  doc["retrieved_ids"] = result.retrieved_ids;
  doc["n_total"] = result.n_total;
  doc["n_below"] = result.n_below;
  doc["dims_score"] = result.dims_score;
  doc["dims_alpha_star"] = result.dims_alpha_star;
  auto& q = doc["query_ids"] = nlohmann::ordered_json::array();
  for (const auto& r : queries.records()) q.push_back(r.id);
  return doc.dump(2) + "\n";
}

void write_files_atomically(
    const std::vector<std::pair<std::filesystem::path, std::string>>& files) {
  std::vector<std::filesystem::path> temps;
  const auto cleanup = [&] {
    std::error_code ec;
    for (const auto& t : temps) std::filesystem::remove(t, ec);
  };
  for (const auto& [path, content] : files) {
    auto tmp = path;
    tmp += ".tmp";
    temps.push_back(tmp);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) {
      cleanup();
      throw std::runtime_error("cannot write '" + path.string() + "'");
    }
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::filesystem::rename(temps[i], files[i].first);
  }
}

}  // namespace mqscan
