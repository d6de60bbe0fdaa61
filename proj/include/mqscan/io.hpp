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

// Corpus ingestion and result export.
//
// Corpus format: headered CSV. A column named `label` (configurable) holds the
// class tag, an optional column named `id` holds record ids (row index
// otherwise), and every other column is a numeric feature.

#ifndef MQSCAN_IO_HPP_
#define MQSCAN_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mqscan/core.hpp"
#include "mqscan/eval.hpp"

namespace mqscan {

struct CorpusOptions {
  std::string label_column = "label";
  std::string id_column = "id";
};

struct Corpus {
  std::vector<std::string> feature_names;
  std::vector<VectorRecord> records;
};

/// Throws DataError naming the 1-based line for malformed rows, non-finite
/// features and duplicate ids.
Corpus load_corpus(const std::filesystem::path& path,
                   const CorpusOptions& options = {});
Corpus parse_corpus(std::istream& in, const CorpusOptions& options = {},
                    std::string_view source = "<stream>");

/// Writes `id,label,<features>`; values use the shortest decimal form that
/// parses back to the same double.
void write_corpus(std::ostream& out, const Corpus& corpus);

std::string format_double(double v);

/// method,m,run,run_seed,k,retrieved_count,positives,precision,recall
std::string runs_csv(const ExperimentReport& report);
/// method,m,k,runs,mean_p,std_p,mean_r,std_r,mean_retrieved
std::string aggregates_csv(const ExperimentReport& report);

/// JSON document with fields in this order: dims, alpha_star, score,
/// retrieved_count, retrieved_ids, n_total, n_below, dims_score,
/// dims_alpha_star, query_ids.
std::string scan_result_json(const ScanResult& result, const QuerySet& queries);

/// Writes every (path, content) pair through a temporary file and renames
/// only after all temporaries are written, so a failure leaves no result
/// file behind.
void write_files_atomically(
    const std::vector<std::pair<std::filesystem::path, std::string>>& files);

}  // namespace mqscan

#endif  // MQSCAN_IO_HPP_
