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

#include "slitport/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <thread>

#include "json_writer.hpp"
#include "slitport/script.hpp"

namespace slitport {

namespace {

using script::Overrides;

struct Flags {
  std::string cb, cc, alpha, gt, json;
  int truncation = 0;
  bool sample = false;
  std::uint64_t seed = 0;
  double min_fidelity = 0;
  // Set after parsing from the option counts.
  bool has_cb = false, has_cc = false, has_alpha = false, has_gt = false, has_truncation = false;
};

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void add_run_flags(CLI::App& app, Flags& f) {
  app.add_option("--cb", f.cb, "amplitude of b in the teleported state (complex literal)");
  app.add_option("--cc", f.cc, "amplitude of c in the teleported state (complex literal)");
  app.add_option("--alpha", f.alpha, "coherent amplitude of the cavities");
  app.add_option("--truncation", f.truncation, "Fock-space dimension of each cavity");
  app.add_option("--gt", f.gt, "probe coupling angle g*t (number, pi or pi/N)");
  app.add_option("--json", f.json, "write the JSON report to this path");
  app.add_flag("--sample", f.sample, "draw detection outcomes from the Born rule");
  app.add_option("--seed", f.seed, "seed for --sample");
  app.add_option("--min-fidelity", f.min_fidelity, "exit 1 when the final fidelity is below this");
}

void record_counts(const CLI::App& app, Flags& f) {
  f.has_cb = app.count("--cb") > 0;
  f.has_cc = app.count("--cc") > 0;
  f.has_alpha = app.count("--alpha") > 0;
  f.has_gt = app.count("--gt") > 0;
  f.has_truncation = app.count("--truncation") > 0;
}

std::complex<double> complex_flag(const std::string& name, const std::string& text) {
  auto z = script::parse_complex(text);
  if (!z) throw Usage("--" + name + ": malformed number '" + text + "'");
  return *z;
}

double angle_flag(const std::string& name, const std::string& text) {
  auto v = script::parse_value(text);
  if (v && v->form == script::Value::Form::pi) return std::numbers::pi / v->pi_divisor;
  if (v && v->form == script::Value::Form::literal && v->number.imag() == 0) return v->number.real();
  throw Usage("--" + name + ": expected a real number, pi or pi/N, got '" + text + "'");
}

// Fills in the missing amplitude so that |cb|^2 + |cc|^2 = 1 with a
// non-negative real partner.
std::complex<double> partner(const std::string& name, std::complex<double> given) {
  const double rest = 1.0 - std::norm(given);
  if (rest < -kInputNormTolerance) throw Usage("--" + name + " has modulus above 1");
  return std::sqrt(std::max(rest, 0.0));
}

Overrides overrides_from(const Flags& f) {
  Overrides o;
  if (f.has_cb) o.cb = complex_flag("cb", f.cb);
  if (f.has_cc) o.cc = complex_flag("cc", f.cc);
  if (o.cb && !o.cc) o.cc = partner("cb", *o.cb);
  if (o.cc && !o.cb) o.cb = partner("cc", *o.cc);
  if (f.has_alpha) o.alpha = complex_flag("alpha", f.alpha);
  if (f.has_gt) o.gt = angle_flag("gt", f.gt);
  if (f.has_truncation) o.truncation = f.truncation;
  return o;
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Loaded {
  script::ProtocolScript script;
  std::string origin;
};

/// Parses the script text; prints diagnostics and returns nothing on error.
std::optional<Loaded> load(std::string_view text, const std::string& origin, std::ostream& err) {
  auto parsed = script::parse(text);
  if (!parsed.ok()) {
    for (const auto& d : parsed.errors) err << origin << ": " << d.text() << '\n';
    return std::nullopt;
  }
  return Loaded{std::move(parsed.script), origin};
}

std::optional<Loaded> load_path(const std::string& path, std::ostream& err) {
  auto text = read_file(path);
  if (!text) {
    err << "cannot read " << path << '\n';
    return std::nullopt;
  }
  return load(*text, path, err);
}

std::optional<script::Program> checked(const Loaded& loaded, const Overrides& o, std::ostream& err) {
  auto v = script::validate(loaded.script, o);
  if (!v.ok()) {
    for (const auto& d : v.errors) err << loaded.origin << ": " << d.text() << '\n';
    return std::nullopt;
  }
  return std::move(v.program);
}

std::string cell(const std::optional<double>& x) {
  if (!x) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12f", *x);
  return buf;
}

void print_table(const RunReport& r, std::ostream& out) {
  char line[256];
  std::snprintf(line, sizeof line, "%-28s %-16s %-8s %-16s %s\n", "step", "kind", "outcome", "probability",
                "checkpoint fidelity");
  out << line;
  for (const auto& s : r.steps) {
    std::snprintf(line, sizeof line, "%-28s %-16s %-8s %-16s %s\n", s.name.c_str(), std::string(to_string(s.kind)).c_str(),
                  s.outcome ? s.outcome->c_str() : "-", cell(s.probability).c_str(), cell(s.checkpoint_fidelity).c_str());
    out << line;
  }
  out << "cumulative probability  " << cell(r.cumulative_probability) << '\n';
  out << "final fidelity          " << cell(r.final_fidelity) << '\n';
  char tail[32];
  std::snprintf(tail, sizeof tail, "%.3e", r.truncation_tail_mass);
  out << "truncation tail mass    " << tail << '\n';
  if (r.error) out << "error                   " << *r.error << '\n';
}

bool write_json(const std::string& path, const std::string& json, std::ostream& err) {
  if (path.empty()) return true;
  std::ofstream f(path, std::ios::binary);
  f << json;
  if (!f) {
    err << "cannot write " << path << '\n';
    return false;
  }
  return true;
}

int exit_for(RunError::Cause cause) {
  return cause == RunError::Cause::impossible_outcome ? kExitImpossible : kExitInvalid;
}

int execute(const Loaded& loaded, const Flags& f, std::ostream& out, std::ostream& err) {
  const auto program = checked(loaded, overrides_from(f), err);
  if (!program) return kExitInvalid;
  RunOptions options;
  options.mode = f.sample ? OutcomeMode::sample : OutcomeMode::postselect;
  options.seed = f.seed;
  RunReport report;
  int code = kExitOk;
  try {
    report = run_protocol(program->layout, program->steps, program->inputs, options);
  } catch (const RunError& e) {
    report = e.report();
    code = exit_for(e.cause());
    err << "run aborted: " << e.what() << '\n';
  }
  print_table(report, out);
  if (!write_json(f.json, to_json(report), err)) return kExitInvalid;
  if (code != kExitOk) return code;
  if (f.min_fidelity > 0 && report.final_fidelity.value_or(0) < f.min_fidelity) {
    err << "final fidelity " << cell(report.final_fidelity) << " is below --min-fidelity " << f.min_fidelity << '\n';
    return kExitBelowFidelity;
  }
  return kExitOk;
}

int check(const Loaded& loaded, const Flags& f, std::ostream& out, std::ostream& err) {
  const auto program = checked(loaded, overrides_from(f), err);
  if (!program) return kExitInvalid;
  out << loaded.origin << ": ok (" << loaded.script.commands.size() << " commands, " << program->layout.screens.size()
      << " screens, " << program->layout.cavities.size() << " cavities, " << program->steps.size() << " steps)\n";
  return kExitOk;
}

struct SweepRun {
  std::string text;
  std::complex<double> value;
  std::optional<double> fidelity, probability;
  std::optional<std::string> error;
  int code = kExitOk;
};

int sweep(const Loaded& loaded, const std::string& param, const std::vector<std::string>& values, const Flags& f,
          std::ostream& out, std::ostream& err) {
  if (values.empty()) {
    err << "--values is empty\n";
    return kExitInvalid;
  }
  const Overrides base = overrides_from(f);
  std::vector<SweepRun> runs(values.size());
  std::vector<Overrides> settings(values.size(), base);
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto& r = runs[i];
    r.text = values[i];
    auto& o = settings[i];
    try {
      if (param == "alpha") {
        r.value = complex_flag("values", values[i]);
        o.alpha = r.value;
        if (!f.has_truncation)
          o.truncation = std::max(script::resolve_inputs(loaded.script, o).truncation,
                                  script::required_truncation(loaded.script, o));
      } else if (param == "gt") {
        r.value = angle_flag("values", values[i]);
        o.gt = r.value.real();
      } else {
        r.value = complex_flag("values", values[i]);
        o.cb = r.value;
        o.cc = partner("values", r.value);
      }
    } catch (const Usage& e) {
      r.error = e.what();
      r.code = kExitInvalid;
    }
  }

  RunOptions options;
  options.mode = f.sample ? OutcomeMode::sample : OutcomeMode::postselect;
  options.seed = f.seed;
  options.verify_checkpoints = false;

  auto work = [&](std::size_t i) {
    auto& r = runs[i];
    if (r.error) return;
    auto v = script::validate(loaded.script, settings[i]);
    if (!v.ok()) {
      r.error = v.errors.front().text();
      r.code = kExitInvalid;
      return;
    }
    try {
      const auto report = run_protocol(v.program->layout, v.program->steps, v.program->inputs, options);
      r.fidelity = report.final_fidelity;
      r.probability = report.cumulative_probability;
    } catch (const RunError& e) {
      r.error = e.what();
      r.code = exit_for(e.cause());
    }
  };

  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::min<std::size_t>(values.size(), 8));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < runs.size();) work(i);
    });
  for (auto& t : pool) t.join();

  detail::JsonWriter w;
  w.begin_object();
  w.key("param");
  w.value(param);
  w.key("runs");
  w.begin_array();
  for (const auto& r : runs) {
    w.begin_object();
    w.key("cumulative_probability");
    w.value(r.probability);
    if (r.error) {
      w.key("error");
      w.value(*r.error);
    }
    w.key("final_fidelity");
    w.value(r.fidelity);
    w.key("value");
    if (r.value.imag() == 0)
      w.value(r.value.real());
    else
      w.value(r.value);
    w.end_object();
  }
  w.end_array();
  w.end_object();

  char line[256];
  std::snprintf(line, sizeof line, "%-14s %-16s %-16s %s\n", param.c_str(), "final fidelity", "probability", "error");
  out << line;
  int successes = 0, first_failure = kExitOk;
  for (const auto& r : runs) {
    std::snprintf(line, sizeof line, "%-14s %-16s %-16s %s\n", r.text.c_str(), cell(r.fidelity).c_str(),
                  cell(r.probability).c_str(), r.error ? r.error->c_str() : "-");
    out << line;
    if (!r.error)
      ++successes;
    else if (first_failure == kExitOk)
      first_failure = r.code;
  }
  if (!write_json(f.json, w.str(), err)) return kExitInvalid;
  return successes > 0 ? kExitOk : first_failure;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulate slit-state teleportation protocols written as .qprot scripts."};
  app.name("slitport");
  app.require_subcommand(1);

  Flags run_flags, check_flags, paper_flags, sweep_flags;
  std::string run_path, check_path, sweep_path, sweep_param;
  std::vector<std::string> sweep_values;

  auto* run = app.add_subcommand("run", "execute a script");
  run->add_option("script", run_path, "path to a .qprot script")->required();
  add_run_flags(*run, run_flags);

  auto* chk = app.add_subcommand("check", "parse and validate a script without running it");
  chk->add_option("script", check_path, "path to a .qprot script")->required();
  chk->add_option("--cb", check_flags.cb);
  chk->add_option("--cc", check_flags.cc);
  chk->add_option("--alpha", check_flags.alpha);
  chk->add_option("--truncation", check_flags.truncation);
  chk->add_option("--gt", check_flags.gt);

  auto* paper = app.add_subcommand("paper", "run the built-in scenario with every checkpoint verified");
  add_run_flags(*paper, paper_flags);

  auto* sw = app.add_subcommand("sweep", "run one parameter over a list of values");
  sw->add_option("--script", sweep_path, "script to sweep (default: the built-in scenario)");
  sw->add_option("--param", sweep_param, "parameter to vary")->required()->check(CLI::IsMember({"alpha", "gt", "cb"}));
  sw->add_option("--values", sweep_values, "comma-separated values")->required()->delimiter(',');
  add_run_flags(*sw, sweep_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalid;
  }

  try {
    if (run->parsed()) {
      record_counts(*run, run_flags);
      auto loaded = load_path(run_path, err);
      return loaded ? execute(*loaded, run_flags, out, err) : kExitInvalid;
    }
    if (chk->parsed()) {
      record_counts(*chk, check_flags);
      auto loaded = load_path(check_path, err);
      return loaded ? check(*loaded, check_flags, out, err) : kExitInvalid;
    }
    if (paper->parsed()) {
      record_counts(*paper, paper_flags);
      auto loaded = load(script::paper_scenario(), "paper.qprot", err);
      return loaded ? execute(*loaded, paper_flags, out, err) : kExitInvalid;
    }
    record_counts(*sw, sweep_flags);
    std::erase(sweep_values, std::string());
    auto loaded = sweep_path.empty() ? load(script::paper_scenario(), "paper.qprot", err) : load_path(sweep_path, err);
    return loaded ? sweep(*loaded, sweep_param, sweep_values, sweep_flags, out, err) : kExitInvalid;
  } catch (const Usage& e) {
    err << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace slitport
