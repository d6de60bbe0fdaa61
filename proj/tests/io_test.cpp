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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>
#include <random>
#include <set>
#include <sstream>

#include "mqscan/retrieval.hpp"
#include "support/oracles.hpp"

namespace mqscan {
namespace {

Corpus parse(const std::string& text, const CorpusOptions& opt = {}) {
  std::istringstream in(text);
  return parse_corpus(in, opt, "mem.csv");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const DataError& e) {
    return e.what();
  }
  return "no error";
}

TEST(LoadCorpus, BreastCancerTable) {
  const auto c = load_corpus(std::filesystem::path(MQSCAN_DATA_DIR) / "breast_cancer.csv");
  EXPECT_EQ(c.records.size(), 569u);
  EXPECT_EQ(c.feature_names.size(), 30u);
  std::map<std::string, int> counts;
  for (const auto& r : c.records) {
    ++counts[r.label.value()];
    EXPECT_EQ(r.values.size(), 30u);
  }
  EXPECT_EQ(counts.size(), 2u);
  EXPECT_EQ(counts["Benign"], 357);
  EXPECT_EQ(counts["Malignant"], 212);
}

TEST(ParseCorpus, SingleRow) {
  const auto c = parse("id,label,a,b\nr0,x,1.5,-2\n");
  ASSERT_EQ(c.records.size(), 1u);
  EXPECT_EQ(c.records[0].id, "r0");
  EXPECT_EQ(c.records[0].label, "x");
  EXPECT_EQ(c.records[0].values, (std::vector<double>{1.5, -2.0}));
  EXPECT_EQ(c.feature_names, (std::vector<std::string>{"a", "b"}));
}

TEST(ParseCorpus, RowIndexIdsWhenColumnAbsent) {
  const auto c = parse("label,f\na,1\nb,2\n");
  EXPECT_EQ(c.records[0].id, "0");
  EXPECT_EQ(c.records[1].id, "1");
}

TEST(ParseCorpus, QuotedFieldsAndCustomColumns) {
  CorpusOptions opt;
  opt.label_column = "class";
  opt.id_column = "key";
  const auto c = parse("f1,class,key,f2\n1,\"a, \"\"b\"\"\",k1,2\r\n", opt);
  EXPECT_EQ(c.records[0].label, "a, \"b\"");
  EXPECT_EQ(c.records[0].id, "k1");
  EXPECT_EQ(c.records[0].values, (std::vector<double>{1.0, 2.0}));
}

TEST(ParseCorpus, ErrorsNameTheLine) {
  EXPECT_NE(error_of("id,label,a\nr0,x,1\nr1,x,abc\n").find("mem.csv:3"), std::string::npos);
  EXPECT_NE(error_of("id,label,a\nr0,x,nan\n").find("mem.csv:2"), std::string::npos);
  EXPECT_NE(error_of("id,label,a\nr0,x,inf\n").find("mem.csv:2"), std::string::npos);
  EXPECT_NE(error_of("id,label,a\nr0,x,1\nr0,y,2\n").find("duplicate"), std::string::npos);
  EXPECT_NE(error_of("id,label,a\nr0,x,1,2\n").find("mem.csv:2"), std::string::npos);
  EXPECT_NE(error_of("id,a\nr0,1\n").find("label"), std::string::npos);
  EXPECT_NE(error_of("id,label,a\n").find("no data"), std::string::npos);
  EXPECT_NE(error_of("").find("header"), std::string::npos);
  EXPECT_THROW(load_corpus("/nonexistent/corpus.csv"), DataError);
}

TEST(WriteCorpus, RoundTripsExactly) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int t = 0; t < 20; ++t) {
    Corpus c;
    c.feature_names = {"f0", "f1", "f2"};
    c.records = oracle::random_records(rng, 25, 3);
    for (auto& r : c.records) {
      r.label = t % 2 ? "x,y" : "plain";
      r.values[0] *= u(rng);
      r.values[2] = std::ldexp(r.values[2], static_cast<int>(u(rng) / 2e4));
    }
    std::stringstream s;
    write_corpus(s, c);
    const auto back = parse_corpus(s);
    ASSERT_EQ(back.records.size(), c.records.size());
    EXPECT_EQ(back.feature_names, c.feature_names);
    for (std::size_t i = 0; i < c.records.size(); ++i) {
      EXPECT_EQ(back.records[i].id, c.records[i].id);
      EXPECT_EQ(back.records[i].label, c.records[i].label);
      EXPECT_EQ(back.records[i].values, c.records[i].values);
    }
  }
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(2.0 / 3.0), "0.6666666666666666");
}

ExperimentReport tiny_report() {
  ExperimentReport rep;
  rep.dataset = "d";
  rep.class_c = "c";
  RunRecord scan;
  scan.m = 2;
  scan.run = 0;
  scan.run_seed = 99;
  scan.precision = 1.0;
  scan.recall = 0.5;
  scan.retrieved_count = 3;
  scan.positives = 6;
  RunRecord pre = scan;
  pre.method = Method::kKdTreePre;
  pre.k = 6;
  pre.precision = pre.recall = 0.5;
  pre.retrieved_count = 6;
  rep.rows = {scan, pre};
  rep.aggregates = aggregate_rows(rep.rows);
  return rep;
}

TEST(ReportCsv, HeadersAndRows) {
  const auto rep = tiny_report();
  EXPECT_EQ(runs_csv(rep),
            "method,m,run,run_seed,k,retrieved_count,positives,precision,recall\n"
            "scan,2,0,99,,3,6,1,0.5\n"
            "kdtree_pre,2,0,99,6,6,6,0.5,0.5\n");
  EXPECT_EQ(aggregates_csv(rep),
            "method,m,k,runs,mean_p,std_p,mean_r,std_r,mean_retrieved\n"
            "scan,2,,1,1,0,0.5,0,3\n"
            "kdtree_pre,2,6,1,0.5,0,0.5,0,6\n");
}

TEST(ScanResultJson, FieldOrder) {
  ScanResult r;
  r.dims = {1, 3};
  r.retrieved_ids = {"b", "a"};
  r.score = 4.25;
  r.alpha_star = 0.125;
  r.n_total = 4;
  r.n_below = 4;
  r.dims_score = 2.5;
  r.dims_alpha_star = 0.0625;
  const QuerySet q({{"q1", {}, {0.0}}});
  const auto doc = nlohmann::ordered_json::parse(scan_result_json(r, q));
  std::vector<std::string> keys;
  for (const auto& [k, v] : doc.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"dims", "alpha_star", "score",
                                            "retrieved_count", "retrieved_ids",
                                            "n_total", "n_below", "dims_score",
                                            "dims_alpha_star", "query_ids"}));
  EXPECT_EQ(doc["retrieved_count"], 2);
  EXPECT_EQ(doc["retrieved_ids"][0], "b");
  EXPECT_EQ(doc["query_ids"][0], "q1");
  EXPECT_EQ(doc["alpha_star"].get<double>(), 0.125);
}

TEST(WriteFilesAtomically, WritesAllOrNothing) {
  const auto dir = std::filesystem::temp_directory_path() / "mqscan_io_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  write_files_atomically({{dir / "a.txt", "alpha"}, {dir / "b.txt", "beta"}});
  std::ifstream a(dir / "a.txt");
  std::string s;
  std::getline(a, s);
  EXPECT_EQ(s, "alpha");

  EXPECT_ANY_THROW(write_files_atomically(
      {{dir / "c.txt", "gamma"}, {dir / "missing" / "d.txt", "delta"}}));
  EXPECT_FALSE(std::filesystem::exists(dir / "c.txt"));
  EXPECT_FALSE(std::filesystem::exists(dir / "c.txt.tmp"));
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace mqscan
