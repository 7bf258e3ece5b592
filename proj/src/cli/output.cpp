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

#include "output.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "crbc/error.hpp"

#ifndef CRBC_VERSION
#define CRBC_VERSION "0.0.0"
#endif

namespace crbc::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  for (const auto& h : header) cell(h);
  end_row();
}

CsvWriter& CsvWriter::cell(const std::string& text) {
  if (filled_ > 0) out_ << ',';
  if (text.find_first_of(",\"\n") != std::string::npos) {
    out_ << '"';
    for (char c : text) {
      if (c == '"') out_ << '"';
      out_ << c;
    }
    out_ << '"';
  } else {
    out_ << text;
  }
  ++filled_;
  return *this;
}

CsvWriter& CsvWriter::cell(double v) { return cell(format_number(v)); }
CsvWriter& CsvWriter::cell(long long v) { return cell(std::to_string(v)); }
CsvWriter& CsvWriter::cell(unsigned long long v) { return cell(std::to_string(v)); }

void CsvWriter::end_row() {
  if (filled_ != columns_) {
    throw Error(ErrorCode::kBadShape, "CSV row has " + std::to_string(filled_) + " cells, expected " +
                                          std::to_string(columns_));
  }
  out_ << '\n';
  filled_ = 0;
}

std::string file_stem(const std::string& statistic_name) {
  std::string out;
  for (char c : statistic_name) {
    if (c == '(') {
      out += '_';
    } else if (c != ')') {
      out += c;
    }
  }
  return out;
}

json ks_to_json(const KsResult& ks) {
  return {{"statistic", ks.statistic}, {"critical", ks.critical}, {"alpha", ks.alpha}, {"pass", ks.pass}};
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

json summary_to_json(const ExperimentSummary& summary, const json& config) {
  json stats = json::object();
  for (const auto& s : summary.statistics) {
    json entry = {{"mean", s.mean}, {"variance", s.variance}, {"count", s.trials.size()}};
    entry["ks"] = s.ks ? ks_to_json(*s.ks) : json(nullptr);
    if (s.reference_mean) entry["reference_mean"] = *s.reference_mean;
    if (s.reference_variance) entry["reference_variance"] = *s.reference_variance;
    if (s.reference_law) entry["reference_law"] = {{"a", s.reference_law->a()}, {"b", s.reference_law->b()}};
    if (s.mean_matrix) entry["mean_matrix"] = matrix_to_json(*s.mean_matrix);
    if (s.frobenius_error) entry["frobenius_error"] = *s.frobenius_error;
    stats[s.name] = entry;
  }
  const auto& d = summary.diagnostics;
  return {{"config", config},
          {"n", summary.n},
          {"m", summary.m},
          {"p", summary.p},
          {"trials", summary.trials},
          {"excluded_trials", summary.excluded_trials},
          {"statistics", stats},
          {"diagnostics",
           {{"min_w_eigenvalue", d.min_w_eigenvalue},
            {"max_w_eigenvalue", d.max_w_eigenvalue},
            {"min_crb_gap", d.min_crb_gap},
            {"max_ellipse_ratio", d.max_ellipse_ratio}}}};
}

void write_samples_csv(std::ostream& out, const ExperimentSummary& summary) {
  CsvWriter csv(out, {"trial", "statistic", "value"});
  for (const auto& s : summary.statistics) {
    const auto per = static_cast<std::size_t>(s.values_per_trial);
    for (std::size_t k = 0; k < s.trials.size(); ++k) {
      for (std::size_t v = 0; v < per; ++v) {
        csv.cell(static_cast<unsigned long long>(s.trials[k])).cell(s.name).cell(s.samples[k * per + v]);
        csv.end_row();
      }
    }
  }
}

void write_histogram_csv(std::ostream& out, const Histogram& h) {
  CsvWriter csv(out, {"bin_left", "bin_right", "count", "density"});
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    csv.cell(h.edges[k]).cell(h.edges[k + 1]).cell(static_cast<unsigned long long>(h.counts[k]));
    csv.cell(h.density(k));
    csv.end_row();
  }
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kConfigError, "cannot write '" + path.string() + "'");
  out << contents;
  if (!out) throw Error(ErrorCode::kConfigError, "failed writing '" + path.string() + "'");
}

json RunManifest::to_json() const {
  return {{"command", command},     {"config", config},
          {"seed", seed},           {"version", library_version()},
          {"outputs", outputs},     {"duration_seconds", duration_seconds}};
}

std::string library_version() { return CRBC_VERSION; }

}  // namespace crbc::cli
