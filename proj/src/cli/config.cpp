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

#include "config.hpp"

#include <cstdlib>
#include <fstream>
#include <numbers>

#include "crbc/error.hpp"

namespace crbc::cli {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::kConfigError, msg); }

// Stream key for model matrices, kept apart from compressor streams.
constexpr std::uint64_t kModelStreamSalt = 0x6d6f64656c475f31ULL;

}  // namespace

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    config_error("config file '" + path + "': " + e.what());
  }
  if (!doc.is_object()) config_error("config file '" + path + "' must hold a JSON object");
  if (doc.contains("command") && doc.contains("config")) return doc.at("config");
  return doc;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, const json& config) {
  if (flag) return *flag;
  if (config.contains("seed")) return config.at("seed").get<std::uint64_t>();
  if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const std::string text(env);
      const unsigned long long v = std::stoull(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    } catch (const std::exception&) {
      config_error(std::string(kSeedEnv) + " is not an unsigned integer");
    }
  }
  return kDefaultSeed;
}

UlaScenario scenario_from_json(const json& j) {
  UlaScenario s;
  s.n = j.at("n").get<Eigen::Index>();
  if (!j.contains("sources")) {
    s = UlaScenario::two_source(s.n);
  } else {
    for (const auto& src : j.at("sources")) {
      s.sources.push_back(UlaSource{src.value("theta", 0.0), src.value("amplitude", 1.0),
                                    src.value("phase", 0.0)});
    }
  }
  s.validate();
  return s;
}

json scenario_to_json(const UlaScenario& s) {
  json sources = json::array();
  for (const auto& src : s.sources) {
    sources.push_back({{"theta", src.theta}, {"amplitude", src.amplitude}, {"phase", src.phase}});
  }
  return {{"type", "ula"}, {"n", s.n}, {"sources", sources}};
}

ComplexMatrix random_jacobian(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
  RngStream stream = derive_stream(seed ^ kModelStreamSalt, 0);
  CompressorSpec spec;
  spec.m = p;
  spec.n = n;
  // A p x n Gaussian draw, transposed: entries CN(0, 1).
  return sample(spec, stream).transpose();
}

ResolvedModel resolve_model(json& config, int default_n) {
  json& model = config["model"];
  if (model.is_null()) model = json::object();
  const std::string type = model.value("type", "ula");
  model["type"] = type;
  if (!model.contains("n")) model["n"] = default_n;

  ResolvedModel out;
  if (type == "ula") {
    UlaScenario s = scenario_from_json(model);
    model = scenario_to_json(s);
    auto ula = std::make_shared<UlaModel>(s);
    out.theta = s.angles();
    out.jacobian = ula->jacobian(out.theta);
    out.model = ula;
    out.scenario = s;
  } else if (type == "random") {
    const Eigen::Index n = model.at("n").get<Eigen::Index>();
    const Eigen::Index p = model.value("p", Eigen::Index{2});
    const std::uint64_t seed = model.value("seed", std::uint64_t{7});
    model["p"] = p;
    model["seed"] = seed;
    if (p < 1 || n <= p) config_error("random model: need 1 <= p < n");
    ComplexMatrix g = random_jacobian(n, p, seed);
    out.theta = RealVector::Zero(p);
    out.model = std::make_shared<FunctionModel>(
        n, p, [g](const RealVector& theta) -> ComplexVector { return g * theta.cast<Complex>(); },
        [g](const RealVector&) { return g; });
    out.jacobian = std::move(g);
  } else {
    config_error("unknown model type '" + type + "' (expected ula or random)");
  }
  return out;
}

ExperimentConfig experiment_from_json(json& config, const ResolvedModel& model) {
  ExperimentConfig cfg;
  cfg.jacobian = model.jacobian;
  const Eigen::Index n = model.jacobian.rows();
  const Eigen::Index p = model.jacobian.cols();

  cfg.sigma2 = config.value("sigma2", 1.0);
  config["sigma2"] = cfg.sigma2;

  json& comp = config["compressor"];
  if (comp.is_null()) comp = json::object();
  cfg.compressor.n = n;
  cfg.compressor.m = comp.value("m", static_cast<Eigen::Index>(n / 2));
  cfg.compressor.family = parse_family(comp.value("family", std::string("gaussian")));
  cfg.compressor.element_variance = comp.value("element_variance", 1.0);
  cfg.compressor.radial = parse_radial_law(comp.value("radial", std::string("chi")));
  comp["m"] = cfg.compressor.m;
  comp["family"] = family_name(cfg.compressor.family);
  comp["element_variance"] = cfg.compressor.element_variance;
  comp["radial"] = radial_law_name(cfg.compressor.radial);

  cfg.compressor.seed = resolve_seed(std::nullopt, config);
  config["seed"] = cfg.compressor.seed;
  cfg.trials = config.value("trials", std::size_t{10000});
  config["trials"] = cfg.trials;
  cfg.histogram_bins = config.value("histogram_bins", 50);
  config["histogram_bins"] = cfg.histogram_bins;
  cfg.alpha = config.value("alpha", 0.01);
  config["alpha"] = cfg.alpha;
  cfg.threads = config.value("threads", 0u);
  config["threads"] = cfg.threads;
  cfg.allow_law_violation = config.value("allow_law_violation", false);
  config["allow_law_violation"] = cfg.allow_law_violation;

  if (!config.contains("statistics")) config["statistics"] = {"crb_ratio(0)"};
  for (const auto& s : config.at("statistics")) {
    cfg.statistics.push_back(StatisticRequest::parse(s.get<std::string>()));
  }

  bool need_kl = false;
  for (const auto& s : cfg.statistics) need_kl |= s.kind == StatisticKind::kKlRatio;
  if (need_kl) {
    RealVector theta_prime = model.theta;
    if (config.contains("theta_prime")) {
      const auto values = config.at("theta_prime").get<std::vector<double>>();
      if (static_cast<Eigen::Index>(values.size()) != p) {
        config_error("theta_prime must have one entry per parameter");
      }
      theta_prime = Eigen::Map<const RealVector>(values.data(), p);
    } else {
      // Default: move the first parameter by a quarter of the Rayleigh cell.
      theta_prime(0) += std::numbers::pi / (2.0 * static_cast<double>(n));
      config["theta_prime"] = std::vector<double>(theta_prime.data(), theta_prime.data() + p);
    }
    cfg.kl_delta = model.model->mean(model.theta) - model.model->mean(theta_prime);
  }
  return cfg;
}

}  // namespace crbc::cli
