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

// Screens, cavities and atoms, and the step-by-step engine that drives a
// composite state through them.

#ifndef SLITPORT_PROTOCOL_HPP
#define SLITPORT_PROTOCOL_HPP

#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "slitport/fockspace.hpp"

namespace slitport {

struct Screen {
  std::string name;
  std::vector<std::string> slits;
};

struct Cavity {
  std::string name;
  std::complex<double> alpha;
  int truncation = 64;
};

/// Initial internal state of an atom: a basis label, or "input", which means
/// cb|b> - cc|c> for a lambda atom and cb|f> + cc|e> for a two-level one.
struct AtomSpec {
  std::string name;
  RegisterKind kind = RegisterKind::lambda3;
  std::string initial = "b";
};

inline constexpr std::string_view kInputState = "input";

/// Amplitudes psi_source(target) of free flight between two screens.
/// matrix(target, source); columns may have norm below one (flux that
/// misses the target screen).
struct PropagationKernel {
  std::string name;
  std::string source_screen;
  std::string target_screen;
  Matrix matrix;
};

/// Tolerance on kernel column norms above one.
inline constexpr double kKernelNormTolerance = 1e-12;

struct ExperimentLayout {
  std::vector<Screen> screens;
  std::vector<Cavity> cavities;
  std::vector<AtomSpec> atoms;
  /// (screen, slit) -> cavity behind that slit.
  std::map<std::pair<std::string, std::string>, std::string> bindings;
  std::map<std::string, PropagationKernel> kernels;
  /// Atom whose path register carries the teleported state at the end.
  std::optional<std::string> target_atom;

  const Screen& screen(const std::string& name) const;
  const Cavity& cavity(const std::string& name) const;
  const AtomSpec& atom(const std::string& name) const;
  const PropagationKernel& kernel(const std::string& name) const;
};

/// Structural problems of a layout; empty when it is usable.
std::vector<std::string> layout_problems(const ExperimentLayout& layout);

namespace step {
struct Split {
  std::string atom, screen;
  bool operator==(const Split&) const = default;
};
struct Pass {
  std::string atom, screen;
  double phi = std::numbers::pi;
  bool operator==(const Pass&) const = default;
};
struct DetectInternal {
  std::string atom, label;
  bool operator==(const DetectInternal&) const = default;
};
struct DetectPosition {
  std::string atom, label;
  bool operator==(const DetectPosition&) const = default;
};
struct Propagate {
  std::string atom, kernel;
  bool operator==(const Propagate&) const = default;
};
struct Inject {
  std::string cavity;
  std::complex<double> beta;
  bool operator==(const Inject&) const = default;
};
struct JcPass {
  std::string atom, cavity;
  double gt = 0;
  bool operator==(const JcPass&) const = default;
};
struct Checkpoint {
  std::string name;
  bool operator==(const Checkpoint&) const = default;
};
}  // namespace step

using Instruction = std::variant<step::Split, step::Pass, step::DetectInternal, step::DetectPosition,
                                 step::Propagate, step::Inject, step::JcPass, step::Checkpoint>;

std::string describe(const Instruction& instruction);

enum class StepKind { split, cavity_pass, detect_internal, propagate, detect_position, inject, jc_pass, detect_probe, checkpoint };

std::string_view to_string(StepKind kind);

/// One executed step. `probability` is the absolute branch probability for
/// detections, the transmitted flux for propagations and 1 otherwise.
struct StepRecord {
  std::string name;
  StepKind kind;
  std::optional<std::string> outcome;
  double probability = 1;
  std::optional<double> checkpoint_fidelity;
};

struct RunInputs {
  std::complex<double> cb = std::numbers::sqrt2 / 2;
  std::complex<double> cc = std::numbers::sqrt2 / 2;
  std::complex<double> alpha = 2.0;
  int truncation = 64;
  double gt = std::numbers::pi / 8;
};

enum class OutcomeMode { postselect, sample };

struct RunOptions {
  OutcomeMode mode = OutcomeMode::postselect;
  std::uint64_t seed = 0;
  bool verify_checkpoints = true;
};

struct RunReport {
  std::vector<StepRecord> steps;
  /// Product of the detection probabilities.
  double cumulative_probability = 1;
  std::optional<double> final_fidelity;
  /// Largest probability dropped by the Fock truncation (coherent tails and
  /// displacement leakage).
  double truncation_tail_mass = 0;
  RunInputs inputs;
  std::optional<std::string> error;
};

/// Canonical JSON: sorted keys, 17 significant digits.
std::string to_json(const RunReport& report);

/// A run that stopped at a failing step; carries what was done so far.
class RunError : public Error {
 public:
  enum class Cause { impossible_outcome, truncation, invalid };
  RunError(Cause cause, RunReport report, const std::string& message)
      : Error(message), cause_(cause), report_(std::move(report)) {}
  Cause cause() const { return cause_; }
  const RunReport& report() const { return report_; }

 private:
  Cause cause_;
  RunReport report_;
};

// Individual operations on the composite state.

/// Adds the path register of `path` over the screen's two slits in equal
/// superposition. The register must not exist yet.
State split_at_screen(const State& state, const std::string& path, const Screen& screen);

/// For every slit s of the screen, applies dispersive_lambda(phi) to
/// (internal, cavity behind s) on the branch where the atom went through s.
State conditional_cavity_pass(const State& state, const std::string& path, const std::string& internal,
                              const Screen& screen, const ExperimentLayout& layout, double phi);

Projection detect_internal(const State& state, const std::string& internal, const std::string& label);

/// Re-expresses the path register in the kernel's target basis. The result
/// is not renormalized: flux the kernel does not transmit is lost.
State propagate(const State& state, const std::string& path, const PropagationKernel& kernel,
                const ExperimentLayout& layout);

Projection detect_position(const State& state, const std::string& path, const std::string& label);

/// Displaces the cavity mode by beta; throws TruncationError when more than
/// kTailMassTolerance would leave the truncated space.
State inject_coherent(const State& state, const std::string& cavity, std::complex<double> beta);

State jc_pass(const State& state, const std::string& probe, const std::string& cavity, double gt);

/// Initial product of every cavity in its coherent state.
State initial_state(const ExperimentLayout& layout);

/// Executes the steps in order. Detections follow the listed outcome in
/// post-selection mode and draw from the Born rule in sampling mode.
/// Throws RunError with the partial report on failure.
RunReport run_protocol(const ExperimentLayout& layout, const std::vector<Instruction>& steps,
                       const RunInputs& inputs, const RunOptions& options = {});

}  // namespace slitport

#endif  // SLITPORT_PROTOCOL_HPP
