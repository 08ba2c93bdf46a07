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

#include "slitport/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "json_writer.hpp"
#include "slitport/gates.hpp"
#include "slitport/names.hpp"
#include "slitport/oracle.hpp"

namespace slitport {

namespace {

template <typename T>
const T& find_named(const std::vector<T>& items, const std::string& name, const char* what) {
  for (const auto& item : items)
    if (item.name == name) return item;
  throw Error(std::string("unknown ") + what + " " + name);
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

const Screen& ExperimentLayout::screen(const std::string& name) const { return find_named(screens, name, "screen"); }
const Cavity& ExperimentLayout::cavity(const std::string& name) const { return find_named(cavities, name, "cavity"); }
const AtomSpec& ExperimentLayout::atom(const std::string& name) const { return find_named(atoms, name, "atom"); }

const PropagationKernel& ExperimentLayout::kernel(const std::string& name) const {
  auto it = kernels.find(name);
  if (it == kernels.end()) throw Error("unknown kernel " + name);
  return it->second;
}

std::vector<std::string> layout_problems(const ExperimentLayout& layout) {
  std::vector<std::string> problems;
  std::set<std::string> names;
  auto unique = [&](const std::string& name, const char* what) {
    if (!names.insert(name).second) problems.push_back(std::string("duplicate ") + what + " " + name);
  };
  for (const auto& s : layout.screens) {
    unique(s.name, "screen");
    if (s.slits.empty()) problems.push_back("screen " + s.name + " has no slits");
    if (std::set<std::string>(s.slits.begin(), s.slits.end()).size() != s.slits.size())
      problems.push_back("screen " + s.name + " repeats a slit label");
  }
  for (const auto& c : layout.cavities) {
    unique(c.name, "cavity");
    if (c.truncation < 2) problems.push_back("cavity " + c.name + " needs truncation >= 2");
  }
  for (const auto& a : layout.atoms) {
    unique(a.name, "atom");
    if (a.kind != RegisterKind::lambda3 && a.kind != RegisterKind::qubit2)
      problems.push_back("atom " + a.name + " must be lambda3 or qubit2");
    if (a.initial != kInputState) {
      const Register r = a.kind == RegisterKind::qubit2 ? Register::qubit2("x") : Register::lambda3("x");
      if (!r.find(a.initial)) problems.push_back("atom " + a.name + " has unknown initial label " + a.initial);
    }
  }

  auto has_screen = [&](const std::string& n) {
    return std::any_of(layout.screens.begin(), layout.screens.end(), [&](const Screen& s) { return s.name == n; });
  };
  auto has_cavity = [&](const std::string& n) {
    return std::any_of(layout.cavities.begin(), layout.cavities.end(), [&](const Cavity& c) { return c.name == n; });
  };

  std::map<std::string, std::set<std::string>> cavities_per_screen;
  for (const auto& [where, cavity] : layout.bindings) {
    const auto& [screen, slit] = where;
    if (!has_screen(screen)) {
      problems.push_back("binding names unknown screen " + screen);
      continue;
    }
    const auto& slits = layout.screen(screen).slits;
    if (std::find(slits.begin(), slits.end(), slit) == slits.end())
      problems.push_back("binding names unknown slit " + slit + " of screen " + screen);
    if (!has_cavity(cavity)) problems.push_back("binding names unknown cavity " + cavity);
    if (!cavities_per_screen[screen].insert(cavity).second)
      problems.push_back("cavity " + cavity + " is bound to two slits of screen " + screen);
  }

  for (const auto& [name, k] : layout.kernels) {
    if (!has_screen(k.source_screen) || !has_screen(k.target_screen)) {
      problems.push_back("kernel " + name + " names an unknown screen");
      continue;
    }
    const auto rows = static_cast<Eigen::Index>(layout.screen(k.target_screen).slits.size());
    const auto cols = static_cast<Eigen::Index>(layout.screen(k.source_screen).slits.size());
    if (k.matrix.rows() != rows || k.matrix.cols() != cols) {
      problems.push_back("kernel " + name + " shape does not match its screens");
      continue;
    }
    for (Eigen::Index j = 0; j < cols; ++j)
      if (k.matrix.col(j).norm() > 1.0 + kKernelNormTolerance)
        problems.push_back("kernel " + name + ": kernel column exceeds unit norm");
  }

  if (layout.target_atom &&
      std::none_of(layout.atoms.begin(), layout.atoms.end(), [&](const AtomSpec& a) { return a.name == *layout.target_atom; }))
    problems.push_back("target atom " + *layout.target_atom + " is not declared");
  return problems;
}

std::string describe(const Instruction& instruction) {
  return std::visit(overloaded{
                        [](const step::Split& s) { return "split " + s.atom + " " + s.screen; },
                        [](const step::Pass& s) { return "pass " + s.atom + " " + s.screen; },
                        [](const step::DetectInternal& s) { return "detect " + s.atom + " internal " + s.label; },
                        [](const step::DetectPosition& s) { return "detect " + s.atom + " position " + s.label; },
                        [](const step::Propagate& s) { return "propagate " + s.atom + " " + s.kernel; },
                        [](const step::Inject& s) { return "inject " + s.cavity; },
                        [](const step::JcPass& s) { return "jcpass " + s.atom + " " + s.cavity; },
                        [](const step::Checkpoint& s) { return "checkpoint " + s.name; },
                    },
                    instruction);
}

std::string_view to_string(StepKind kind) {
  switch (kind) {
    case StepKind::split: return "split";
    case StepKind::cavity_pass: return "cavity_pass";
    case StepKind::detect_internal: return "detect_internal";
    case StepKind::propagate: return "propagate";
    case StepKind::detect_position: return "detect_position";
    case StepKind::inject: return "inject";
    case StepKind::jc_pass: return "jc_pass";
    case StepKind::detect_probe: return "detect_probe";
    case StepKind::checkpoint: return "checkpoint";
  }
  return "?";
}

std::string to_json(const RunReport& report) {
  detail::JsonWriter w;
  w.begin_object();
  w.key("cumulative_probability");
  w.value(report.cumulative_probability);
  if (report.error) {
    w.key("error");
    w.value(*report.error);
  }
  w.key("final_fidelity");
  w.value(report.final_fidelity);
  w.key("inputs");
  w.begin_object();
  w.key("alpha");
  w.value(report.inputs.alpha);
  w.key("cb");
  w.value(report.inputs.cb);
  w.key("cc");
  w.value(report.inputs.cc);
  w.key("gt");
  w.value(report.inputs.gt);
  w.key("truncation");
  w.value(report.inputs.truncation);
  w.end_object();
  w.key("steps");
  w.begin_array();
  for (const auto& s : report.steps) {
    w.begin_object();
    w.key("checkpoint_fidelity");
    w.value(s.checkpoint_fidelity);
    w.key("kind");
    w.value(to_string(s.kind));
    w.key("name");
    w.value(s.name);
    w.key("outcome");
    w.value(s.outcome);
    w.key("probability");
    w.value(s.probability);
    w.end_object();
  }
  w.end_array();
  w.key("truncation_tail_mass");
  w.value(report.truncation_tail_mass);
  w.end_object();
  return w.str();
}

State split_at_screen(const State& state, const std::string& path, const Screen& screen) {
  if (screen.slits.size() != 2)
    throw Error("screen " + screen.name + " has " + std::to_string(screen.slits.size()) + " slits; splitting needs 2");
  if (state.has(path)) throw Error("register " + path + " is already split");
  Vector even = Vector::Constant(2, std::numbers::sqrt2 / 2);
  return append_register(state, Register::path(path, screen.slits), even);
}

State conditional_cavity_pass(const State& state, const std::string& path, const std::string& internal,
                              const Screen& screen, const ExperimentLayout& layout, double phi) {
  if (state.reg(path).labels() != screen.slits)
    throw Error("register " + path + " is not in the slit basis of screen " + screen.name);
  State out = state;
  for (const auto& slit : screen.slits) {
    auto it = layout.bindings.find({screen.name, slit});
    if (it == layout.bindings.end()) throw Error("slit " + slit + " has no cavity");
    const std::string& cavity = it->second;
    if (!out.has(cavity)) throw DimensionError("cavity register " + cavity + " is missing");
    const int truncation = static_cast<int>(out.reg(cavity).dim());
    out = apply_controlled(out, dispersive_lambda(phi, truncation).on({internal, cavity}), path, slit);
  }
  return out;
}

Projection detect_internal(const State& state, const std::string& internal, const std::string& label) {
  return project(state, internal, label);
}

State propagate(const State& state, const std::string& path, const PropagationKernel& kernel,
                const ExperimentLayout& layout) {
  const auto& source = layout.screen(kernel.source_screen);
  const auto& target = layout.screen(kernel.target_screen);
  if (state.reg(path).labels() != source.slits)
    throw Error("register " + path + " is not in the basis of screen " + source.name + " (kernel " + kernel.name + ")");
  return rebase_register(state, path, Register::path(path, target.slits), kernel.matrix);
}

Projection detect_position(const State& state, const std::string& path, const std::string& label) {
  return project(state, path, label);
}

namespace {

std::pair<State, double> displace_with_leakage(const State& state, const std::string& cavity,
                                               std::complex<double> beta) {
  const double leak = displacement_leakage(state, cavity, beta) / state.squared_norm();
  if (leak > kTailMassTolerance)
    throw TruncationError("displacing " + cavity + " leaks " + detail::format_number(leak) +
                          " above truncation " + std::to_string(state.reg(cavity).dim()));
  const int truncation = static_cast<int>(state.reg(cavity).dim());
  return {apply_op(state, displacement(beta, truncation).on({cavity})), leak};
}

}  // namespace

State inject_coherent(const State& state, const std::string& cavity, std::complex<double> beta) {
  return displace_with_leakage(state, cavity, beta).first;
}

State jc_pass(const State& state, const std::string& probe, const std::string& cavity, double gt) {
  const int truncation = static_cast<int>(state.reg(cavity).dim());
  return apply_op(state, jc_unitary(gt, truncation).on({probe, cavity}));
}

State initial_state(const ExperimentLayout& layout) {
  std::vector<Register> regs;
  Assignment<double> assignment;
  for (const auto& c : layout.cavities) {
    regs.push_back(Register::mode(c.name, c.truncation));
    assignment[c.name] = coherent_amplitudes(c.alpha, c.truncation);
  }
  return make_state(regs, assignment);
}

namespace {

class Engine {
 public:
  Engine(const ExperimentLayout& layout, const RunInputs& inputs, const RunOptions& options)
      : layout_(layout), options_(options), rng_(options.seed), state_(State({}, Vector::Ones(1))) {
    report_.inputs = inputs;
  }

  RunReport run(const std::vector<Instruction>& steps) {
    guarded("setup", [&] { setup(); });
    for (const auto& s : steps) guarded(describe(s), [&] { std::visit([&](const auto& x) { execute(x); }, s); });
    guarded("final fidelity", [&] { finish(); });
    return report_;
  }

 private:
  template <typename F>
  void guarded(const std::string& what, F&& body) {
    try {
      body();
    } catch (const ImpossibleOutcome& e) {
      fail(RunError::Cause::impossible_outcome, what, e.what());
    } catch (const TruncationError& e) {
      fail(RunError::Cause::truncation, what, e.what());
    } catch (const Error& e) {
      fail(RunError::Cause::invalid, what, e.what());
    }
  }

  [[noreturn]] void fail(RunError::Cause cause, const std::string& what, const std::string& message) {
    report_.error = what + ": " + message;
    throw RunError(cause, report_, *report_.error);
  }

  void setup() {
    if (auto problems = layout_problems(layout_); !problems.empty()) throw Error(problems.front());
    const auto& in = report_.inputs;
    if (std::abs(std::norm(in.cb) + std::norm(in.cc) - 1.0) > kInputNormTolerance)
      throw Error("inputs must satisfy |cb|^2 + |cc|^2 = 1");
    for (const auto& c : layout_.cavities)
      report_.truncation_tail_mass = std::max(report_.truncation_tail_mass, coherent_tail_mass(c.alpha, c.truncation));
    state_ = initial_state(layout_);
  }

  void record(StepRecord r) {
    if (r.kind == StepKind::detect_internal || r.kind == StepKind::detect_position || r.kind == StepKind::detect_probe)
      report_.cumulative_probability *= r.probability;
    report_.steps.push_back(std::move(r));
  }

  Vector initial_internal(const AtomSpec& atom) const {
    const auto& in = report_.inputs;
    if (atom.initial == kInputState) {
      if (atom.kind == RegisterKind::qubit2) return (Vector(2) << in.cb, in.cc).finished();
      return (Vector(3) << 0.0, in.cb, -in.cc).finished();
    }
    const Register r = atom.kind == RegisterKind::qubit2 ? Register::qubit2("x") : Register::lambda3("x");
    Vector v = Vector::Zero(r.dim());
    v[r.index_of(atom.initial)] = 1;
    return v;
  }

  /// Brings the atom's internal register into the state on first use.
  const AtomSpec& enter(const std::string& name) {
    const auto& atom = layout_.atom(name);
    const auto internal = internal_register(name);
    if (consumed_.count(internal)) throw Error("atom " + name + " has already been detected");
    if (!state_.has(internal)) {
      Register r = atom.kind == RegisterKind::qubit2 ? Register::qubit2(internal) : Register::lambda3(internal);
      state_ = append_register(state_, std::move(r), initial_internal(atom));
    }
    return atom;
  }

  std::string require_path(const std::string& atom) const {
    const auto path = path_register(atom);
    if (!state_.has(path)) throw Error("atom " + atom + " has no path register (not split, or already detected)");
    return path;
  }

  std::string choose_outcome(const std::string& reg, const std::string& listed) {
    if (options_.mode == OutcomeMode::postselect) return listed;
    const auto p = outcome_probabilities(state_, reg);
    std::discrete_distribution<std::size_t> draw(p.begin(), p.end());
    return state_.reg(reg).labels()[draw(rng_)];
  }

  void execute(const step::Split& s) {
    state_ = split_at_screen(state_, path_register(s.atom), layout_.screen(s.screen));
    enter(s.atom);
    record({describe(s), StepKind::split, std::nullopt, 1.0, std::nullopt});
  }

  void execute(const step::Pass& s) {
    const auto path = require_path(s.atom);
    const auto& atom = enter(s.atom);
    if (atom.kind != RegisterKind::lambda3) throw Error("atom " + s.atom + " is not a lambda atom");
    state_ = conditional_cavity_pass(state_, path, internal_register(s.atom), layout_.screen(s.screen), layout_, s.phi);
    record({describe(s), StepKind::cavity_pass, std::nullopt, 1.0, std::nullopt});
  }

  void execute(const step::DetectInternal& s) {
    const auto& atom = enter(s.atom);
    const auto internal = internal_register(s.atom);
    const auto outcome = choose_outcome(internal, s.label);
    auto [projected, probability] = detect_internal(state_, internal, outcome);
    state_ = slice(projected, internal, outcome);
    consumed_.insert(internal);
    const auto kind = atom.kind == RegisterKind::qubit2 ? StepKind::detect_probe : StepKind::detect_internal;
    record({describe(s), kind, outcome, probability, std::nullopt});
  }

  void execute(const step::DetectPosition& s) {
    const auto path = require_path(s.atom);
    const auto outcome = choose_outcome(path, s.label);
    auto [projected, probability] = detect_position(state_, path, outcome);
    state_ = slice(projected, path, outcome);
    record({describe(s), StepKind::detect_position, outcome, probability, std::nullopt});
  }

  void execute(const step::Propagate& s) {
    const auto path = require_path(s.atom);
    const double before = state_.squared_norm();
    state_ = propagate(state_, path, layout_.kernel(s.kernel), layout_);
    record({describe(s), StepKind::propagate, std::nullopt, state_.squared_norm() / before, std::nullopt});
  }

  void execute(const step::Inject& s) {
    auto [next, leak] = displace_with_leakage(state_, s.cavity, s.beta);
    state_ = std::move(next);
    report_.truncation_tail_mass = std::max(report_.truncation_tail_mass, leak);
    record({describe(s), StepKind::inject, std::nullopt, 1.0, std::nullopt});
  }

  void execute(const step::JcPass& s) {
    enter(s.atom);
    state_ = jc_pass(state_, internal_register(s.atom), s.cavity, s.gt);
    record({describe(s), StepKind::jc_pass, std::nullopt, 1.0, std::nullopt});
  }

  void execute(const step::Checkpoint& s) {
    std::optional<double> f;
    if (options_.verify_checkpoints) {
      const auto id = parse_checkpoint(s.name);
      if (!id) throw Error("unknown checkpoint " + s.name);
      const auto& in = report_.inputs;
      f = checkpoint_fidelity(state_, expected_state(*id, {in.cb, in.cc, in.alpha, in.truncation, in.gt}));
    }
    record({describe(s), StepKind::checkpoint, std::nullopt, 1.0, f});
  }

  void finish() {
    if (!layout_.target_atom) return;
    const auto path = require_path(*layout_.target_atom);
    if (state_.reg(path).dim() != 2) throw DimensionError("target path register " + path + " is not two-dimensional");
    const auto& in = report_.inputs;
    Vector target(2);
    target << in.cb, in.cc;
    report_.final_fidelity = reduced_fidelity(state_, {path}, target);
  }

  const ExperimentLayout& layout_;
  RunOptions options_;
  std::mt19937_64 rng_;
  State state_;
  RunReport report_;
  std::set<std::string> consumed_;
};

}  // namespace

RunReport run_protocol(const ExperimentLayout& layout, const std::vector<Instruction>& steps, const RunInputs& inputs,
                       const RunOptions& options) {
  return Engine(layout, inputs, options).run(steps);
}

}  // namespace slitport
