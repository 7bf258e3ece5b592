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

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "config.hpp"
#include "crbc/betalaw.hpp"
#include "crbc/error.hpp"
#include "crbc/fisher.hpp"
#include "crbc/planner.hpp"
#include "output.hpp"
#include "svg.hpp"

namespace crbc::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr int kDefaultN = 128;
const std::vector<double> kDefaultConfidences = {0.90, 0.99};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Options shared by every command that needs a signal model.
struct ModelFlags {
  std::string config_path;
  std::optional<int> n;
  std::optional<std::string> model;
  std::optional<int> p;
  std::optional<std::uint64_t> model_seed;
  std::optional<double> sigma2;

  void add(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file (or a run manifest)");
    cmd->add_option("--n", n, "ambient dimension (sensor count)");
    cmd->add_option("--model", model, "signal model: ula or random");
    cmd->add_option("--p", p, "parameter count of the random model");
    cmd->add_option("--model-seed", model_seed, "seed of the random model's Jacobian");
    cmd->add_option("--sigma2", sigma2, "noise variance");
  }

  json load() const {
    json cfg = config_path.empty() ? json::object() : load_config_file(config_path);
    json& model_cfg = cfg["model"];
    if (model_cfg.is_null()) model_cfg = json::object();
    if (model && *model != model_cfg.value("type", std::string("ula"))) {
      // A different model type invalidates type-specific keys from the file.
      const json old = model_cfg;
      model_cfg = json::object();
      if (old.contains("n")) model_cfg["n"] = old["n"];
      model_cfg["type"] = *model;
    }
    if (n) model_cfg["n"] = *n;
    if (p) model_cfg["p"] = *p;
    if (model_seed) model_cfg["seed"] = *model_seed;
    if (sigma2) cfg["sigma2"] = *sigma2;
    if (!cfg.contains("sigma2")) cfg["sigma2"] = 1.0;
    return cfg;
  }
};

struct CompressorFlags {
  std::optional<int> m;
  std::optional<std::string> family;
  std::optional<double> element_variance;
  std::optional<std::string> radial;
  std::optional<std::uint64_t> seed;

  void add(CLI::App* cmd) {
    cmd->add_option("--m", m, "compressed dimension");
    cmd->add_option("--family", family, "compressor family: gaussian, stiefel or spherical_rows");
    cmd->add_option("--element-variance", element_variance, "complex variance of compressor entries");
    cmd->add_option("--radial", radial, "row-norm law of spherical_rows: chi or constant");
    cmd->add_option("--seed", seed, "campaign seed (falls back to $CRB_COMPRESS_SEED)");
  }

  void apply(json& cfg) const {
    json& comp = cfg["compressor"];
    if (comp.is_null()) comp = json::object();
    if (m) comp["m"] = *m;
    if (family) comp["family"] = *family;
    if (element_variance) comp["element_variance"] = *element_variance;
    if (radial) comp["radial"] = *radial;
    cfg["seed"] = resolve_seed(seed, cfg);
  }
};

void write_manifest(const fs::path& dir, RunManifest manifest) {
  manifest.outputs.push_back((dir / "manifest.json").string());
  write_file(dir / "manifest.json", manifest.to_json().dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// fisher
// ---------------------------------------------------------------------------

struct FisherCommand {
  ModelFlags model;
  std::string out_dir;

  void add(CLI::App& app, std::function<void()>& action, std::ostream& out) {
    auto* cmd = app.add_subcommand("fisher", "Fisher information and per-parameter CRBs of a scenario");
    model.add(cmd);
    cmd->add_option("--out", out_dir, "directory for fisher.json and manifest.json");
    cmd->callback([this, &action, &out] { action = [this, &out] { run(out); }; });
  }

  void run(std::ostream& out) {
    const auto start = Clock::now();
    json cfg = model.load();
    const ResolvedModel rm = resolve_model(cfg, kDefaultN);
    const double sigma2 = cfg.at("sigma2").get<double>();
    const FimResult f = fim(rm.jacobian, sigma2);
    json crbs = json::array(), angle = json::array();
    for (Eigen::Index i = 0; i < f.p(); ++i) {
      crbs.push_back(crb(f, i));
      angle.push_back(crb_angle_form(rm.jacobian, sigma2, i));
    }
    const json doc = {{"config", cfg},
                      {"n", f.n()},
                      {"p", f.p()},
                      {"sigma2", sigma2},
                      {"theta", std::vector<double>(rm.theta.data(), rm.theta.data() + rm.theta.size())},
                      {"fim", matrix_to_json(f.j.matrix())},
                      {"crb", crbs},
                      {"crb_angle_form", angle}};
    out << doc.dump(2) << "\n";
    if (!out_dir.empty()) {
      const fs::path dir(out_dir);
      write_file(dir / "fisher.json", doc.dump(2) + "\n");
      write_manifest(dir, RunManifest{"fisher", cfg, 0, {(dir / "fisher.json").string()},
                                      seconds_since(start)});
    }
  }
};

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateCommand {
  ModelFlags model;
  CompressorFlags compressor;
  std::optional<std::size_t> trials;
  std::vector<std::string> statistics;
  std::optional<int> bins;
  std::optional<double> alpha;
  std::optional<unsigned> threads;
  std::vector<double> theta_prime;
  bool allow_law_violation = false;
  std::string out_dir = "simulate_out";

  void add(CLI::App& app, std::function<void()>& action, std::ostream& out) {
    auto* cmd = app.add_subcommand("simulate", "Monte Carlo campaign over random compressors");
    model.add(cmd);
    compressor.add(cmd);
    cmd->add_option("--trials", trials, "number of compressor draws");
    cmd->add_option("--statistics", statistics,
                    "crb_ratio(i), crb_inflation(i), kl_ratio, w_eigenvalues, w_mean, fim_mean")
        ->delimiter(',');
    cmd->add_option("--bins", bins, "histogram bins");
    cmd->add_option("--alpha", alpha, "KS significance level");
    cmd->add_option("--threads", threads, "worker threads (results do not depend on it)");
    cmd->add_option("--theta-prime", theta_prime, "second parameter point for kl_ratio")->delimiter(',');
    cmd->add_flag("--allow-law-violation", allow_law_violation, "run even when n - p < m");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->callback([this, &action, &out] { action = [this, &out] { run(out); }; });
  }

  void run(std::ostream& out) {
    const auto start = Clock::now();
    json cfg = model.load();
    compressor.apply(cfg);
    if (trials) cfg["trials"] = *trials;
    if (!statistics.empty()) cfg["statistics"] = statistics;
    if (bins) cfg["histogram_bins"] = *bins;
    if (alpha) cfg["alpha"] = *alpha;
    if (threads) cfg["threads"] = *threads;
    if (!theta_prime.empty()) cfg["theta_prime"] = theta_prime;
    if (allow_law_violation) cfg["allow_law_violation"] = true;

    const ResolvedModel rm = resolve_model(cfg, kDefaultN);
    const ExperimentConfig exp = experiment_from_json(cfg, rm);
    const ExperimentSummary summary = run_campaign(exp);

    const fs::path dir(out_dir);
    std::vector<std::string> outputs;
    const json doc = summary_to_json(summary, cfg);
    write_file(dir / "summary.json", doc.dump(2) + "\n");
    outputs.push_back((dir / "summary.json").string());
    std::ostringstream samples;
    write_samples_csv(samples, summary);
    write_file(dir / "samples.csv", samples.str());
    outputs.push_back((dir / "samples.csv").string());
    for (const auto& s : summary.statistics) {
      std::ostringstream hist;
      write_histogram_csv(hist, s.histogram);
      const fs::path path = dir / ("histogram_" + file_stem(s.name) + ".csv");
      write_file(path, hist.str());
      outputs.push_back(path.string());
    }
    write_manifest(dir, RunManifest{"simulate", cfg, exp.compressor.seed, outputs, seconds_since(start)});
    out << doc.dump(2) << "\n";
  }

  static ExperimentSummary run_campaign(const ExperimentConfig& exp) { return crbc::run(exp); }
};

// ---------------------------------------------------------------------------
// dist
// ---------------------------------------------------------------------------

struct DistCommand {
  std::string law = "crb-ratio";
  std::optional<double> a, b;
  std::optional<int> n, m, p;
  std::string eval = "pdf";
  std::vector<double> at;

  void add(CLI::App& app, std::function<void()>& action, std::ostream& out) {
    auto* cmd = app.add_subcommand("dist", "Evaluate pdf/cdf/quantile of the analytical laws");
    cmd->add_option("--law", law, "beta, crb-ratio, crb-inflation or kl-ratio")
        ->check(CLI::IsMember({"beta", "crb-ratio", "crb-inflation", "kl-ratio"}));
    cmd->add_option("--a", a, "first shape (beta)");
    cmd->add_option("--b", b, "second shape (beta)");
    cmd->add_option("--n", n, "ambient dimension");
    cmd->add_option("--m", m, "compressed dimension");
    cmd->add_option("--p", p, "parameter count");
    cmd->add_option("--eval", eval, "pdf, logpdf, cdf, sf, quantile, mean or variance")
        ->check(CLI::IsMember({"pdf", "logpdf", "cdf", "sf", "quantile", "mean", "variance"}));
    cmd->add_option("--at", at, "evaluation points (comma separated)")->delimiter(',');
    cmd->callback([this, &action, &out] { action = [this, &out] { run(out); }; });
  }

  static int need(const std::optional<int>& v, const char* flag) {
    if (!v) throw Error(ErrorCode::kConfigError, std::string("dist: ") + flag + " is required for this law");
    return *v;
  }

  void run(std::ostream& out) {
    std::optional<BetaLaw> beta;
    bool inverted = false;  // crb-inflation is the law of 1/X
    if (law == "beta") {
      if (!a || !b) throw Error(ErrorCode::kConfigError, "dist: --a and --b are required for beta");
      beta = BetaLaw(*a, *b);
    } else if (law == "kl-ratio") {
      beta = kl_ratio_law(need(n, "--n"), need(m, "--m"));
    } else {
      beta = crb_ratio_law(need(n, "--n"), need(m, "--m"), need(p, "--p"));
      inverted = law == "crb-inflation";
    }
    const BetaLaw& x = *beta;
    if (eval == "mean" || eval == "variance") {
      double v = 0.0;
      if (!inverted) {
        v = eval == "mean" ? x.mean() : x.variance();
      } else {
        // Moments of 1/X for X ~ Beta(a, b).
        const double s = x.a() + x.b();
        if (!(x.a() > (eval == "mean" ? 1.0 : 2.0))) {
          throw Error(ErrorCode::kDomainError, "dist: moment of the CRB inflation does not exist");
        }
        const double mean = (s - 1.0) / (x.a() - 1.0);
        v = eval == "mean" ? mean : mean * x.b() / ((x.a() - 1.0) * (x.a() - 2.0));
      }
      out << format_number(v) << "\n";
      return;
    }
    if (at.empty()) throw Error(ErrorCode::kConfigError, "dist: --at is required for " + eval);
    for (double t : at) {
      double v = 0.0;
      if (!inverted) {
        if (eval == "pdf") v = x.pdf(t);
        else if (eval == "logpdf") v = x.log_pdf(t);
        else if (eval == "cdf") v = x.cdf(t);
        else if (eval == "sf") v = x.sf(t);
        else v = x.quantile(t);
      } else {
        if (eval == "quantile") {
          v = 1.0 / x.quantile(1.0 - t);
        } else {
          if (!(t >= 1.0)) {
            if (eval == "logpdf") v = -std::numeric_limits<double>::infinity();
            else if (eval == "sf") v = 1.0;
            else v = 0.0;
          } else if (eval == "pdf") {
            v = x.pdf(1.0 / t) / (t * t);
          } else if (eval == "logpdf") {
            v = x.log_pdf(1.0 / t) - 2.0 * std::log(t);
          } else if (eval == "cdf") {
            v = x.sf(1.0 / t);
          } else {
            v = x.cdf(1.0 / t);
          }
        }
      }
      out << format_number(v) << "\n";
    }
  }
};

// ---------------------------------------------------------------------------
// plan
// ---------------------------------------------------------------------------

std::vector<double> parse_grid(const std::string& spec) {
  // start:stop:step
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(std::stod(item));
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
    throw Error(ErrorCode::kConfigError, "grid must be start:stop:step with step > 0");
  }
  std::vector<double> out;
  const auto count = static_cast<int>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (int k = 0; k <= count; ++k) out.push_back(parts[0] + k * parts[2]);
  return out;
}

void write_plan_csv(std::ostream& out, int n, const std::vector<CurveRow>& rows) {
  CsvWriter csv(out, {"kappa", "confidence", "m", "ratio"});
  for (const auto& row : rows) {
    csv.cell(row.kappa).cell(row.confidence);
    if (row.m) {
      csv.cell(static_cast<long long>(*row.m)).cell(*row.ratio(n));
    } else {
      csv.cell(std::string()).cell(std::string());
    }
    csv.end_row();
  }
}

const std::vector<double>& default_kappa_grid() {
  static const std::vector<double> grid = parse_grid("1.25:10:0.25");
  return grid;
}

struct PlanCommand {
  int n = kDefaultN;
  int p = 2;
  std::vector<double> kappas;
  std::string kappa_grid;
  std::vector<double> confidences;
  std::string out_path;

  void add(CLI::App& app, std::function<void()>& action, std::ostream& out) {
    auto* cmd = app.add_subcommand("plan", "Smallest m meeting a CRB-inflation bound at a confidence");
    cmd->add_option("--n", n, "ambient dimension");
    cmd->add_option("--p", p, "parameter count");
    cmd->add_option("--kappa", kappas, "tolerable CRB inflation factor(s)")->delimiter(',');
    cmd->add_option("--kappa-grid", kappa_grid, "kappa grid start:stop:step");
    cmd->add_option("--confidence", confidences, "confidence level(s)")->delimiter(',');
    cmd->add_option("--out", out_path, "CSV file (default: standard output)");
    cmd->callback([this, &action, &out] { action = [this, &out] { run(out); }; });
  }

  void run(std::ostream& out) {
    std::vector<double> ks = kappas;
    if (!kappa_grid.empty()) {
      const auto grid = parse_grid(kappa_grid);
      ks.insert(ks.end(), grid.begin(), grid.end());
    }
    const std::vector<double> cs = confidences.empty() ? kDefaultConfidences : confidences;
    std::vector<CurveRow> rows;
    if (ks.size() == 1 && cs.size() == 1) {
      // A single query is a hard question: infeasibility is an error.
      const int m = min_measurements(PlanQuery{n, p, ks[0], cs[0]});
      rows.push_back(CurveRow{ks[0], cs[0], m, confidence_at(n, m, p, ks[0])});
    } else {
      if (ks.empty()) ks = default_kappa_grid();
      rows = curve(n, p, ks, cs);
    }
    std::ostringstream csv;
    write_plan_csv(csv, n, rows);
    if (out_path.empty()) {
      out << csv.str();
    } else {
      write_file(out_path, csv.str());
    }
  }
};

// ---------------------------------------------------------------------------
// ellipse
// ---------------------------------------------------------------------------

struct EllipseSet {
  std::vector<std::vector<SvgPlot::Point>> curves;  // [0] is the uncompressed locus
  double max_ratio = 0.0;                           // max lambda_max(Re(J)^{-1} Re(J_hat))
};

EllipseSet ellipse_set(const ComplexMatrix& g, double sigma2, const CompressorSpec& spec, int draws,
                       int points) {
  if (g.cols() != 2) throw Error(ErrorCode::kConfigError, "ellipse: the model must have p = 2");
  const FimResult before = fim(g, sigma2);
  const double r2 = before.j(0, 0).real();
  EllipseSet set;
  auto add_curve = [&](const HermitianMatrix& j) {
    std::vector<SvgPlot::Point> c;
    for (const auto& e : ellipse_locus(j, r2, points)) c.push_back({e[0], e[1]});
    c.push_back(c.front());
    set.curves.push_back(std::move(c));
  };
  add_curve(before.j);
  for (int d = 0; d < draws; ++d) {
    const ComplexMatrix phi = sample_trial(spec, static_cast<std::uint64_t>(d));
    const FimResult after = compressed_fim(g, phi, sigma2);
    Eigen::GeneralizedSelfAdjointEigenSolver<RealMatrix> ges(after.j.real_part(), before.j.real_part(),
                                                              Eigen::EigenvaluesOnly);
    set.max_ratio = std::max(set.max_ratio, ges.eigenvalues().maxCoeff());
    add_curve(after.j);
  }
  return set;
}

void write_ellipse_csv(std::ostream& out, const EllipseSet& set) {
  CsvWriter csv(out, {"curve_id", "x", "y"});
  for (std::size_t id = 0; id < set.curves.size(); ++id) {
    for (const auto& pt : set.curves[id]) {
      csv.cell(static_cast<unsigned long long>(id)).cell(pt[0]).cell(pt[1]);
      csv.end_row();
    }
  }
}

std::string ellipse_svg(const EllipseSet& set) {
  SvgPlot plot("Concentration ellipses before and after compression", "e1", "e2");
  plot.set_equal_aspect(true);
  for (std::size_t id = 1; id < set.curves.size(); ++id) plot.polyline(set.curves[id], "#d62728", 0.8, false, 0.5);
  plot.polyline(set.curves[0], "#1f77b4", 2.5);
  plot.legend("uncompressed", "#1f77b4");
  plot.legend("compressed draws", "#d62728");
  return plot.render();
}

struct EllipseCommand {
  ModelFlags model;
  CompressorFlags compressor;
  int draws = 100;
  int points = 181;
  std::string out_path;
  std::string svg_path;

  void add(CLI::App& app, std::function<void()>& action, std::ostream& out) {
    auto* cmd = app.add_subcommand("ellipse", "Concentration-ellipse loci before and after compression");
    model.add(cmd);
    compressor.add(cmd);
    cmd->add_option("--draws", draws, "number of compressed draws");
    cmd->add_option("--points", points, "points per locus");
    cmd->add_option("--out", out_path, "CSV file (default: standard output)");
    cmd->add_option("--svg", svg_path, "optional SVG rendering");
    cmd->callback([this, &action, &out] { action = [this, &out] { run(out); }; });
  }

  void run(std::ostream& out) {
    json cfg = model.load();
    compressor.apply(cfg);
    const ResolvedModel rm = resolve_model(cfg, kDefaultN);
    cfg["statistics"] = {"crb_ratio(0)"};
    const ExperimentConfig exp = experiment_from_json(cfg, rm);
    const EllipseSet set = ellipse_set(rm.jacobian, exp.sigma2, exp.compressor, draws, points);
    std::ostringstream csv;
    write_ellipse_csv(csv, set);
    if (out_path.empty()) {
      out << csv.str();
    } else {
      write_file(out_path, csv.str());
    }
    if (!svg_path.empty()) write_file(svg_path, ellipse_svg(set));
  }
};

// ---------------------------------------------------------------------------
// figures
// ---------------------------------------------------------------------------

struct FiguresCommand {
  std::string out_dir = "figures";
  int n = kDefaultN;
  int m = 64;
  std::size_t trials = 10000;
  int bins = 50;
  int draws = 100;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::string kappa_grid = "1.25:10:0.25";
  std::vector<double> confidences;

  void add(CLI::App& app, std::function<void()>& action, std::ostream& out) {
    auto* cmd = app.add_subcommand("figures", "Histogram, ellipse and planning-curve data with SVG plots");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--n", n, "sensor count of the two-source scenario");
    cmd->add_option("--m", m, "compressed dimension");
    cmd->add_option("--trials", trials, "Monte Carlo draws for the histogram");
    cmd->add_option("--bins", bins, "histogram bins");
    cmd->add_option("--draws", draws, "compressed ellipses to draw");
    cmd->add_option("--seed", seed, "campaign seed (falls back to $CRB_COMPRESS_SEED)");
    cmd->add_option("--threads", threads, "worker threads");
    cmd->add_option("--kappa-grid", kappa_grid, "kappa grid start:stop:step for the planning curves");
    cmd->add_option("--confidence", confidences, "confidence levels")->delimiter(',');
    cmd->callback([this, &action, &out] { action = [this, &out] { run(out); }; });
  }

  void run(std::ostream& out) {
    const auto start = Clock::now();
    const fs::path dir(out_dir);
    std::vector<std::string> outputs;
    auto emit = [&](const std::string& name, const std::string& contents) {
      write_file(dir / name, contents);
      outputs.push_back((dir / name).string());
    };

    json cfg = {{"model", {{"type", "ula"}, {"n", n}}},
                {"sigma2", 1.0},
                // CN(0, 1/m) entries; no projector statistic depends on the scale.
                {"compressor", {{"m", m}, {"family", "gaussian"}, {"element_variance", 1.0 / m}}},
                {"trials", trials},
                {"histogram_bins", bins},
                {"statistics", {"crb_ratio(0)"}},
                {"threads", threads}};
    cfg["seed"] = resolve_seed(seed, json::object());
    const ResolvedModel rm = resolve_model(cfg, n);
    const ExperimentConfig exp = experiment_from_json(cfg, rm);

    // Histogram of the before/after CRB ratio against its beta density.
    const ExperimentSummary summary = crbc::run(exp);
    const StatisticSummary& ratio = summary.statistics.front();
    std::ostringstream hist;
    write_histogram_csv(hist, ratio.histogram);
    emit("fig1_histogram.csv", hist.str());
    const BetaLaw law = *ratio.reference_law;
    std::ostringstream pdf_csv;
    std::vector<SvgPlot::Point> pdf_curve;
    {
      CsvWriter csv(pdf_csv, {"x", "pdf"});
      const double lo = ratio.histogram.edges.front(), hi = ratio.histogram.edges.back();
      for (int k = 0; k <= 400; ++k) {
        const double x = lo + (hi - lo) * k / 400.0;
        const double y = law.pdf(std::clamp(x, 0.0, 1.0));
        csv.cell(x).cell(y);
        csv.end_row();
        pdf_curve.push_back({x, y});
      }
    }
    emit("fig1_pdf.csv", pdf_csv.str());
    emit("fig1_summary.json", summary_to_json(summary, cfg).dump(2) + "\n");
    {
      SvgPlot plot("CRB before / after compression", "ratio", "density");
      std::vector<double> heights;
      for (std::size_t k = 0; k < ratio.histogram.counts.size(); ++k) heights.push_back(ratio.histogram.density(k));
      plot.bars(ratio.histogram.edges, heights, "#1f77b4");
      plot.polyline(pdf_curve, "#d62728", 2.0);
      plot.legend("Monte Carlo", "#1f77b4");
      plot.legend("Beta(" + format_number(law.a()) + ", " + format_number(law.b()) + ")", "#d62728");
      emit("fig1.svg", plot.render());
    }

    // Concentration ellipses.
    const EllipseSet ellipses = ellipse_set(rm.jacobian, exp.sigma2, exp.compressor, draws, 181);
    std::ostringstream ell_csv;
    write_ellipse_csv(ell_csv, ellipses);
    emit("fig2_ellipses.csv", ell_csv.str());
    emit("fig2.svg", ellipse_svg(ellipses));

    // Planning curves.
    const std::vector<double> cs = confidences.empty() ? kDefaultConfidences : confidences;
    const auto rows = curve(n, static_cast<int>(rm.jacobian.cols()), parse_grid(kappa_grid), cs);
    std::ostringstream plan_csv;
    write_plan_csv(plan_csv, n, rows);
    emit("fig3_curves.csv", plan_csv.str());
    {
      SvgPlot plot("Compression ratio needed for a CRB inflation below kappa", "kappa", "m / n");
      const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
      for (std::size_t c = 0; c < cs.size(); ++c) {
        std::vector<SvgPlot::Point> pts;
        for (const auto& row : rows) {
          if (row.confidence == cs[c] && row.m) pts.push_back({row.kappa, *row.ratio(n)});
        }
        const char* color = colors[c % 4];
        plot.polyline(pts, color, 2.0);
        plot.legend("confidence " + format_number(cs[c]), color);
      }
      emit("fig3.svg", plot.render());
    }

    cfg["figures"] = {{"draws", draws}, {"kappa_grid", kappa_grid}, {"confidences", cs}};
    const json report = {
        {"fig1", {{"ks", ks_to_json(*ratio.ks)}, {"mean", ratio.mean}, {"reference_mean", law.mean()}}},
        {"fig2", {{"max_ellipse_ratio", ellipses.max_ratio}, {"all_enclosed", ellipses.max_ratio <= 1.0 + 1e-9}}},
        {"fig3", {{"rows", rows.size()}}}};
    emit("report.json", report.dump(2) + "\n");
    write_manifest(dir, RunManifest{"figures", cfg, exp.compressor.seed, outputs, seconds_since(start)});
    out << report.dump(2) << "\n";
  }
};

void print_error(std::ostream& err, const std::string& code, const std::string& message, int exit_code,
                 const json& extra = json::object()) {
  json doc = {{"error", code}, {"message", message}, {"exit_code", exit_code}};
  doc.update(extra);
  err << doc.dump() << "\n";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfigError:
    case ErrorCode::kBadSpec:
    case ErrorCode::kBadShape:
      return kExitConfig;
    default:
      return kExitNumerical;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fisher information and Cramer-Rao bounds after random compression", "crb-compress"};
  app.require_subcommand(1, 1);
  std::function<void()> action;
  FisherCommand fisher_cmd;
  SimulateCommand simulate_cmd;
  DistCommand dist_cmd;
  PlanCommand plan_cmd;
  EllipseCommand ellipse_cmd;
  FiguresCommand figures_cmd;
  fisher_cmd.add(app, action, out);
  simulate_cmd.add(app, action, out);
  dist_cmd.add(app, action, out);
  plan_cmd.add(app, action, out);
  ellipse_cmd.add(app, action, out);
  figures_cmd.add(app, action, out);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << app.help();
    print_error(err, "UsageError", e.what(), kExitConfig);
    return kExitConfig;
  }

  try {
    if (action) action();
    return kExitOk;
  } catch (const InfeasibleError& e) {
    print_error(err, "Infeasible", e.what(), kExitNumerical, {{"best_confidence", e.best_confidence()}});
    return kExitNumerical;
  } catch (const Error& e) {
    const int code = exit_code_for(e.code());
    print_error(err, std::string(error_code_name(e.code())), e.what(), code);
    return code;
  } catch (const json::exception& e) {
    print_error(err, "ConfigError", e.what(), kExitConfig);
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    print_error(err, "ConfigError", e.what(), kExitConfig);
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    print_error(err, "ConfigError", e.what(), kExitConfig);
    return kExitConfig;
  }
}

}  // namespace crbc::cli
