// Copyright 2026 The Slitport Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Closed-form intermediate states of the built-in teleportation scenario.
//
// Every state here is written down term by term from coherent amplitudes
// and basis kets. Nothing is obtained by running operators, so these states
// are an independent reference for the engine.

#ifndef SLITPORT_ORACLE_HPP
#define SLITPORT_ORACLE_HPP

#include <array>
#include <complex>
#include <numbers>
#include <optional>
#include <string_view>

#include "slitport/fockspace.hpp"

namespace slitport {

enum class CheckpointId {
  A1_split,
  A1_after_cavities,
  A12_after_cavities,
  A12_post_c1b2,
  A123_after_cavities,
  A123_post_b3,
  A123_post_zeta31,
  A12_pre_SC3,
  A2_post_gamma1,
  TELEPST1,
  A24_after_cavities,
  A24_post_rho1,
  A24_post_b4,
  TELEPST2,
  POST_INJECTION,
  POST_JC,
  FINAL,
};

inline constexpr std::size_t kCheckpointCount = 17;

const std::array<CheckpointId, kCheckpointCount>& all_checkpoints();
std::string_view to_string(CheckpointId id);
std::optional<CheckpointId> parse_checkpoint(std::string_view name);

struct OracleInputs {
  std::complex<double> cb = std::numbers::sqrt2 / 2;
  std::complex<double> cc = std::numbers::sqrt2 / 2;
  std::complex<double> alpha = 2.0;
  int truncation = 64;
  double gt = std::numbers::pi / 8;  // only POST_JC depends on it
};

/// The normalized state the scenario should be in at `id`. Registers follow
/// the scenario naming (see names.hpp); their order is the oracle's own, use
/// checkpoint_fidelity() to compare against an engine state.
State expected_state(CheckpointId id, const OracleInputs& inputs);

/// Fidelity of an engine state with an oracle state. When the oracle covers
/// every engine register the register order is matched and the plain
/// fidelity is returned; when it covers a subset, the reduced fidelity on
/// that subset.
double checkpoint_fidelity(const State& engine, const State& expected);

/// Probability that a resonant two-level probe starting in f ends in e after
/// interacting with a coherent field of mean photon number `mean_n`:
/// sum_n |C_n|^2 sin^2(gt sqrt n).
double jc_excited_probability(double mean_n, double gt, int truncation);

}  // namespace slitport

#endif  // SLITPORT_ORACLE_HPP
