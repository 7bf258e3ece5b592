// Copyright 2026 The crb-compress Authors.
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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "crbc/mcharness.hpp"

namespace crbc::cli {

using nlohmann::json;

/// Shortest decimal that reads back to the same double.
std::string format_number(double v);

/// CSV with a header row, comma separator and LF line endings.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);

  CsvWriter& cell(const std::string& text);
  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(unsigned long long v);
  void end_row();

 private:
  std::ostream& out_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

/// "crb_ratio(0)" -> "crb_ratio_0", for file names.
std::string file_stem(const std::string& statistic_name);

json ks_to_json(const KsResult& ks);
json matrix_to_json(const ComplexMatrix& m);

/// Summary document: {config, n, m, p, trials, excluded_trials,
/// statistics: {name: {mean, variance, ks, ...}}, diagnostics}.
json summary_to_json(const ExperimentSummary& summary, const json& config);

/// (trial, statistic, value) rows for every statistic.
void write_samples_csv(std::ostream& out, const ExperimentSummary& summary);
/// (bin_left, bin_right, count, density).
void write_histogram_csv(std::ostream& out, const Histogram& h);

void write_file(const std::filesystem::path& path, const std::string& contents);

struct RunManifest {
  std::string command;
  json config;
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
  double duration_seconds = 0.0;

  json to_json() const;
};

std::string library_version();

}  // namespace crbc::cli
