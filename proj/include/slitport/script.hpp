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

// The .qprot protocol language. One command per line, '#' starts a comment:
//
//   config   key value                  cb, cc, alpha, truncation, gt, target
//   cavity   C alpha V [truncation V]
//   atom     A (lambda3|qubit2) state L  L is a basis label or "input"
//   screen   S label...
//   bind     S slit C                   cavity behind a slit
//   kernel   K S_source S_target [r0c0 r0c1; r1c0 r1c1]
//   split    A S
//   pass     A S phi V
//   detect   A (internal|position) L
//   propagate A K
//   inject   C V
//   jcpass   A C gt V
//   checkpoint NAME
//
// A value V is a number, a complex literal such as 0.5-0.5i, pi or pi/N,
// or $name for one of the config parameters.

#ifndef SLITPORT_SCRIPT_HPP
#define SLITPORT_SCRIPT_HPP

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "slitport/protocol.hpp"

namespace slitport::script {

struct Value {
  enum class Form { literal, pi, parameter };
  Form form = Form::literal;
  std::complex<double> number;
  int pi_divisor = 1;  // pi/pi_divisor
  std::string parameter;

  static Value literal(std::complex<double> z) { return {Form::literal, z, 1, {}}; }
  static Value pi(int divisor = 1) { return {Form::pi, {}, divisor, {}}; }
  static Value param(std::string name) { return {Form::parameter, {}, 1, std::move(name)}; }
  bool operator==(const Value&) const = default;
};

namespace cmd {
struct Config {
  std::string key;
  std::variant<Value, std::string> value;  // string only for "target"
  bool operator==(const Config&) const = default;
};
struct Cavity {
  std::string name;
  Value alpha;
  std::optional<Value> truncation;
  bool operator==(const Cavity&) const = default;
};
struct Atom {
  std::string name;
  RegisterKind kind = RegisterKind::lambda3;
  std::string state;
  bool operator==(const Atom&) const = default;
};
struct Screen {
  std::string name;
  std::vector<std::string> slits;
  bool operator==(const Screen&) const = default;
};
struct Bind {
  std::string screen, slit, cavity;
  bool operator==(const Bind&) const = default;
};
struct Kernel {
  std::string name, source, target;
  std::vector<std::vector<std::complex<double>>> rows;
  bool operator==(const Kernel&) const = default;
};
struct Split {
  std::string atom, screen;
  bool operator==(const Split&) const = default;
};
struct Pass {
  std::string atom, screen;
  Value phi;
  bool operator==(const Pass&) const = default;
};
struct Detect {
  std::string atom;
  bool position = false;
  std::string label;
  bool operator==(const Detect&) const = default;
};
struct Propagate {
  std::string atom, kernel;
  bool operator==(const Propagate&) const = default;
};
struct Inject {
  std::string cavity;
  Value beta;
  bool operator==(const Inject&) const = default;
};
struct JcPass {
  std::string atom, cavity;
  Value gt;
  bool operator==(const JcPass&) const = default;
};
struct Checkpoint {
  std::string name;
  bool operator==(const Checkpoint&) const = default;
};
}  // namespace cmd

using Body = std::variant<cmd::Config, cmd::Cavity, cmd::Atom, cmd::Screen, cmd::Bind, cmd::Kernel, cmd::Split,
                          cmd::Pass, cmd::Detect, cmd::Propagate, cmd::Inject, cmd::JcPass, cmd::Checkpoint>;

struct Command {
  int line = 0;
  Body body;
  // Line numbers are provenance, not structure.
  bool operator==(const Command& other) const { return body == other.body; }
};

struct ProtocolScript {
  std::vector<Command> commands;
  bool operator==(const ProtocolScript&) const = default;
};

struct Diagnostic {
  int line = 0;
  std::string message;
  std::string text() const { return "line " + std::to_string(line) + ": " + message; }
  bool operator==(const Diagnostic&) const = default;
};

struct ParseResult {
  ProtocolScript script;  // every well-formed line, malformed ones skipped
  std::vector<Diagnostic> errors;
  bool ok() const { return errors.empty(); }
};

ParseResult parse(std::string_view text);

/// Canonical text: single spaces, 17 significant digits, symbolic pi kept.
std::string serialize(const ProtocolScript& script);

/// Parses a number or complex literal ("2", "-1e-3", "0.5-0.5i", "i").
std::optional<std::complex<double>> parse_complex(std::string_view token);
std::string format_complex(std::complex<double> z);

/// Parses a value token: a complex literal, pi, pi/N or $name.
std::optional<Value> parse_value(std::string_view token);

/// Command-line values that take precedence over config lines.
struct Overrides {
  std::optional<std::complex<double>> cb, cc, alpha;
  std::optional<int> truncation;
  std::optional<double> gt;
};

struct Program {
  ExperimentLayout layout;
  std::vector<Instruction> steps;
  RunInputs inputs;
};

struct ValidationResult {
  std::optional<Program> program;
  std::vector<Diagnostic> errors;
  bool ok() const { return errors.empty(); }
};

/// Parameters after applying config lines, then overrides. Invalid config
/// lines are skipped here; validate() reports them.
RunInputs resolve_inputs(const ProtocolScript& script, const Overrides& overrides = {});

/// Semantic checks; a program is returned only when there are no errors.
ValidationResult validate(const ProtocolScript& script, const Overrides& overrides = {});

/// Smallest truncation that keeps every cavity within the tail bound, given
/// its initial amplitude plus everything injected into it.
int required_truncation(const ProtocolScript& script, const Overrides& overrides = {});

/// Text of the built-in teleportation scenario (protocols/paper.qprot).
std::string_view paper_scenario();

}  // namespace slitport::script

#endif  // SLITPORT_SCRIPT_HPP
