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

// Configuration for the command-line tool. A run is described by one JSON
// document; command-line flags are written over it before it is turned into
// library types, and the resolved document is what the run manifest keeps.
//
//   {
//     "model": {"type": "ula", "n": 128,
//               "sources": [{"theta": 0, "amplitude": 1, "phase": 0}, ...]},
//     "model": {"type": "random", "n": 64, "p": 2, "seed": 7},   // alternative
//     "theta_prime": [0.01, 0.0245],
//     "sigma2": 1.0,
//     "compressor": {"m": 64, "family": "gaussian",
//                    "element_variance": 1.0, "radial": "chi"},
//     "trials": 10000, "seed": 1, "histogram_bins": 50, "alpha": 0.01,
//     "statistics": ["crb_ratio(0)", "kl_ratio"],
//     "threads": 0, "allow_law_violation": false
//   }

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "crbc/mcharness.hpp"
#include "crbc/sigmodel.hpp"

namespace crbc::cli {

using nlohmann::json;

inline constexpr std::uint64_t kDefaultSeed = 1;
inline constexpr const char* kSeedEnv = "CRB_COMPRESS_SEED";

/// Reads a config file. A run manifest is accepted too, in which case its
/// resolved "config" member is returned.
json load_config_file(const std::string& path);

/// Flag value if given, else the config value, else $CRB_COMPRESS_SEED,
/// else kDefaultSeed.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, const json& config);

/// A model ready for computation: the mean map, its parameters and the
/// Jacobian at those parameters.
struct ResolvedModel {
  std::shared_ptr<const SignalModel> model;
  RealVector theta;
  ComplexMatrix jacobian;
  std::optional<UlaScenario> scenario;
};

/// Fills defaults into config["model"] (two-source ULA with n from
/// `default_n`) and builds the model.
ResolvedModel resolve_model(json& config, int default_n);

/// CN(0, 1) matrix from a dedicated stream; the "random" model uses
/// x(theta) = G theta with this G.
ComplexMatrix random_jacobian(Eigen::Index n, Eigen::Index p, std::uint64_t seed);

UlaScenario scenario_from_json(const json& j);
json scenario_to_json(const UlaScenario& s);

/// Builds the Monte Carlo configuration from a resolved document, filling
/// defaults into `config` as it goes.
ExperimentConfig experiment_from_json(json& config, const ResolvedModel& model);

}  // namespace crbc::cli
