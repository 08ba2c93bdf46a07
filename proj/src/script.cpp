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

#include "slitport/script.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "json_writer.hpp"
#include "slitport/gates.hpp"
#include "slitport/oracle.hpp"

namespace slitport::script {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::optional<double> parse_real(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double x = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(x)) return std::nullopt;
  return x;
}

bool is_identifier(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

}  // namespace

std::optional<Value> parse_value(std::string_view token) {
  if (token.starts_with('$')) {
    if (!is_identifier(token.substr(1))) return std::nullopt;
    return Value::param(std::string(token.substr(1)));
  }
  if (token == "pi") return Value::pi();
  if (token.starts_with("pi/")) {
    int d = 0;
    const auto rest = token.substr(3);
    auto [end, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), d);
    if (ec != std::errc() || end != rest.data() + rest.size() || d <= 0) return std::nullopt;
    return Value::pi(d);
  }
  if (auto z = parse_complex(token)) return Value::literal(*z);
  return std::nullopt;
}

namespace {

std::string format_value(const Value& v) {
  switch (v.form) {
    case Value::Form::literal: return format_complex(v.number);
    case Value::Form::pi: return v.pi_divisor == 1 ? "pi" : "pi/" + std::to_string(v.pi_divisor);
    case Value::Form::parameter: return "$" + v.parameter;
  }
  return {};
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

const std::set<std::string, std::less<>> kConfigKeys = {"alpha", "cb", "cc", "gt", "target", "truncation"};

const std::map<std::string_view, std::string_view> kUsage = {
    {"config", "config KEY VALUE"},
    {"cavity", "cavity NAME alpha VALUE [truncation VALUE]"},
    {"atom", "atom NAME (lambda3|qubit2) state LABEL"},
    {"screen", "screen NAME LABEL..."},
    {"bind", "bind SCREEN SLIT CAVITY"},
    {"kernel", "kernel NAME SOURCE TARGET [ROW; ROW...]"},
    {"split", "split ATOM SCREEN"},
    {"pass", "pass ATOM SCREEN phi ANGLE"},
    {"detect", "detect ATOM (internal|position) LABEL"},
    {"propagate", "propagate ATOM KERNEL"},
    {"inject", "inject CAVITY VALUE"},
    {"jcpass", "jcpass ATOM CAVITY gt ANGLE"},
    {"checkpoint", "checkpoint NAME"},
};

class LineParser {
 public:
  explicit LineParser(std::string_view line) : line_(line), w_(words(line)) {}

  std::variant<Body, std::string> run() {
    const auto keyword = w_.front();
    auto usage = kUsage.find(keyword);
    if (usage == kUsage.end()) return "unknown command '" + std::string(keyword) + "'";
    try {
      return dispatch(keyword);
    } catch (const std::string& message) {
      return message + " (expected: " + std::string(usage->second) + ")";
    }
  }

 private:
  void arity(std::size_t n) const {
    if (w_.size() != n) throw std::string("wrong number of arguments");
  }
  void arity(std::size_t lo, std::size_t hi) const {
    if (w_.size() < lo || w_.size() > hi) throw std::string("wrong number of arguments");
  }
  std::string id(std::size_t i) const {
    if (!is_identifier(w_[i])) throw "invalid name '" + std::string(w_[i]) + "'";
    return std::string(w_[i]);
  }
  void keyword(std::size_t i, std::string_view expected) const {
    if (w_[i] != expected) throw "expected '" + std::string(expected) + "', got '" + std::string(w_[i]) + "'";
  }
  Value value(std::size_t i) const {
    auto v = parse_value(w_[i]);
    if (!v) throw "malformed value '" + std::string(w_[i]) + "'";
    return *v;
  }

  Body dispatch(std::string_view k) {
    if (k == "config") {
      arity(3);
      const std::string key(w_[1]);
      if (!kConfigKeys.count(key)) throw "unknown config key '" + key + "'";
      if (key == "target") return cmd::Config{key, id(2)};
      return cmd::Config{key, value(2)};
    }
    if (k == "cavity") {
      arity(4, 6);
      if (w_.size() == 5) throw std::string("wrong number of arguments");
      keyword(2, "alpha");
      cmd::Cavity c{id(1), value(3), std::nullopt};
      if (w_.size() == 6) {
        keyword(4, "truncation");
        c.truncation = value(5);
      }
      return c;
    }
    if (k == "atom") {
      arity(5);
      RegisterKind kind;
      if (w_[2] == "lambda3")
        kind = RegisterKind::lambda3;
      else if (w_[2] == "qubit2")
        kind = RegisterKind::qubit2;
      else
        throw "unknown atom kind '" + std::string(w_[2]) + "'";
      keyword(3, "state");
      return cmd::Atom{id(1), kind, id(4)};
    }
    if (k == "screen") {
      arity(3, 1000);
      cmd::Screen s{id(1), {}};
      for (std::size_t i = 2; i < w_.size(); ++i) s.slits.push_back(id(i));
      return s;
    }
    if (k == "bind") {
      arity(4);
      return cmd::Bind{id(1), id(2), id(3)};
    }
    if (k == "kernel") return kernel();
    if (k == "split") {
      arity(3);
      return cmd::Split{id(1), id(2)};
    }
    if (k == "pass") {
      arity(5);
      keyword(3, "phi");
      return cmd::Pass{id(1), id(2), value(4)};
    }
    if (k == "detect") {
      arity(4);
      if (w_[2] != "internal" && w_[2] != "position")
        throw "expected 'internal' or 'position', got '" + std::string(w_[2]) + "'";
      return cmd::Detect{id(1), w_[2] == "position", id(3)};
    }
    if (k == "propagate") {
      arity(3);
      return cmd::Propagate{id(1), id(2)};
    }
    if (k == "inject") {
      arity(3);
      return cmd::Inject{id(1), value(2)};
    }
    if (k == "jcpass") {
      arity(5);
      keyword(3, "gt");
      return cmd::JcPass{id(1), id(2), value(4)};
    }
    arity(2);
    return cmd::Checkpoint{id(1)};
  }

  Body kernel() {
    const auto open = line_.find('[');
    if (open == std::string_view::npos) throw std::string("missing matrix literal");
    const auto head = words(line_.substr(0, open));
    if (head.size() != 4) throw std::string("wrong number of arguments");
    w_ = head;
    cmd::Kernel k{id(1), id(2), id(3), {}};
    auto body = line_.substr(open + 1);
    while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.remove_suffix(1);
    if (body.empty() || body.back() != ']') throw std::string("matrix literal must end with ']'");
    body.remove_suffix(1);
    std::size_t start = 0;
    while (true) {
      const auto semi = body.find(';', start);
      const auto row_text = body.substr(start, semi == std::string_view::npos ? body.npos : semi - start);
      std::vector<std::complex<double>> row;
      for (auto token : words(row_text)) {
        auto z = parse_complex(token);
        if (!z) throw "malformed matrix entry '" + std::string(token) + "'";
        row.push_back(*z);
      }
      if (row.empty()) throw std::string("empty matrix row");
      if (!k.rows.empty() && row.size() != k.rows.front().size()) throw std::string("ragged matrix rows");
      k.rows.push_back(std::move(row));
      if (semi == std::string_view::npos) break;
      start = semi + 1;
    }
    return k;
  }

  std::string_view line_;
  std::vector<std::string_view> w_;
};

}  // namespace

std::optional<std::complex<double>> parse_complex(std::string_view token) {
  if (auto x = parse_real(token)) return std::complex<double>(*x, 0);
  if (token.empty() || token.back() != 'i') return std::nullopt;
  const auto body = token.substr(0, token.size() - 1);
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  double re = 0;
  std::string_view im_text = body;
  if (split != std::string_view::npos) {
    auto r = parse_real(body.substr(0, split));
    if (!r) return std::nullopt;
    re = *r;
    im_text = body.substr(split);
  }
  double im;
  if (im_text.empty() || im_text == "+")
    im = 1;
  else if (im_text == "-")
    im = -1;
  else if (auto v = parse_real(im_text))
    im = *v;
  else
    return std::nullopt;
  return std::complex<double>(re, im);
}

std::string format_complex(std::complex<double> z) {
  if (z.imag() == 0) return detail::format_number(z.real());
  const bool negative = z.imag() < 0;
  return detail::format_number(z.real()) + (negative ? "-" : "+") +
         detail::format_number(negative ? -z.imag() : z.imag()) + "i";
}

ParseResult parse(std::string_view text) {
  ParseResult result;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    auto line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++number;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (words(line).empty()) continue;
    auto parsed = LineParser(line).run();
    if (auto* body = std::get_if<Body>(&parsed))
      result.script.commands.push_back({number, std::move(*body)});
    else
      result.errors.push_back({number, std::get<std::string>(parsed)});
  }
  return result;
}

std::string serialize(const ProtocolScript& script) {
  std::ostringstream out;
  for (const auto& c : script.commands) {
    std::visit(overloaded{
                   [&](const cmd::Config& x) {
                     out << "config " << x.key << ' ';
                     if (auto* v = std::get_if<Value>(&x.value))
                       out << format_value(*v);
                     else
                       out << std::get<std::string>(x.value);
                   },
                   [&](const cmd::Cavity& x) {
                     out << "cavity " << x.name << " alpha " << format_value(x.alpha);
                     if (x.truncation) out << " truncation " << format_value(*x.truncation);
                   },
                   [&](const cmd::Atom& x) { out << "atom " << x.name << ' ' << to_string(x.kind) << " state " << x.state; },
                   [&](const cmd::Screen& x) { out << "screen " << x.name << ' ' << join(x.slits, " "); },
                   [&](const cmd::Bind& x) { out << "bind " << x.screen << ' ' << x.slit << ' ' << x.cavity; },
                   [&](const cmd::Kernel& x) {
                     std::vector<std::string> rows;
                     for (const auto& r : x.rows) {
                       std::vector<std::string> entries;
                       for (auto z : r) entries.push_back(format_complex(z));
                       rows.push_back(join(entries, " "));
                     }
                     out << "kernel " << x.name << ' ' << x.source << ' ' << x.target << " [" << join(rows, "; ") << ']';
                   },
                   [&](const cmd::Split& x) { out << "split " << x.atom << ' ' << x.screen; },
                   [&](const cmd::Pass& x) { out << "pass " << x.atom << ' ' << x.screen << " phi " << format_value(x.phi); },
                   [&](const cmd::Detect& x) {
                     out << "detect " << x.atom << (x.position ? " position " : " internal ") << x.label;
                   },
                   [&](const cmd::Propagate& x) { out << "propagate " << x.atom << ' ' << x.kernel; },
                   [&](const cmd::Inject& x) { out << "inject " << x.cavity << ' ' << format_value(x.beta); },
                   [&](const cmd::JcPass& x) {
                     out << "jcpass " << x.atom << ' ' << x.cavity << " gt " << format_value(x.gt);
                   },
                   [&](const cmd::Checkpoint& x) { out << "checkpoint " << x.name; },
               },
               c.body);
    out << '\n';
  }
  return out.str();
}

namespace {

std::string labels_of(RegisterKind kind) {
  return kind == RegisterKind::qubit2 ? "f,e" : "a,b,c";
}

bool valid_internal_label(RegisterKind kind, std::string_view label) {
  const Register r = kind == RegisterKind::qubit2 ? Register::qubit2("x") : Register::lambda3("x");
  return r.find(label).has_value();
}

class Validator {
 public:
  Validator(const ProtocolScript& script, const Overrides& overrides) : script_(script), overrides_(overrides) {}

  void run() {
    resolve_inputs();
    for (const auto& c : script_.commands) {
      line_ = c.line;
      std::visit([&](const auto& x) { check(x); }, c.body);
    }
    finish();
  }

  ValidationResult result() && {
    ValidationResult r;
    std::stable_sort(errors_.begin(), errors_.end(), [](const auto& a, const auto& b) { return a.line < b.line; });
    r.errors = std::move(errors_);
    if (r.errors.empty()) r.program = std::move(program_);
    return r;
  }

  const RunInputs& inputs() const { return program_.inputs; }

  int required_truncation() const {
    int needed = 2;
    for (const auto& [name, c] : cavities_) needed = std::max(needed, minimum_truncation(c.reach));
    return needed;
  }

 private:
  struct CavityInfo {
    int line;
    int truncation;
    double reach;  // |alpha| plus every injected |beta|
  };
  struct AtomState {
    RegisterKind kind;
    std::optional<std::string> screen;  // basis of the path register, if present
    bool detected = false;
  };

  void error(std::string message) { errors_.push_back({line_, std::move(message)}); }

  std::optional<std::complex<double>> resolve(const Value& v) {
    switch (v.form) {
      case Value::Form::literal: return v.number;
      case Value::Form::pi: return std::numbers::pi / v.pi_divisor;
      case Value::Form::parameter: {
        const auto& in = program_.inputs;
        if (v.parameter == "cb") return in.cb;
        if (v.parameter == "cc") return in.cc;
        if (v.parameter == "alpha") return in.alpha;
        if (v.parameter == "gt") return in.gt;
        if (v.parameter == "truncation") return static_cast<double>(in.truncation);
        error("unknown parameter $" + v.parameter + " (valid: alpha,cb,cc,gt,truncation)");
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  std::optional<double> resolve_real(const Value& v, std::string_view what) {
    auto z = resolve(v);
    if (!z) return std::nullopt;
    if (z->imag() != 0) {
      error(std::string(what) + " must be real");
      return std::nullopt;
    }
    return z->real();
  }

  std::optional<int> resolve_truncation(const Value& v) {
    auto x = resolve_real(v, "truncation");
    if (!x) return std::nullopt;
    if (*x != std::floor(*x) || *x < 2 || *x > 1e6) {
      error("truncation must be an integer >= 2");
      return std::nullopt;
    }
    return static_cast<int>(*x);
  }

  void resolve_inputs() {
    auto& in = program_.inputs;
    std::map<std::string, int> seen;
    for (const auto& c : script_.commands) {
      const auto* config = std::get_if<cmd::Config>(&c.body);
      if (!config) continue;
      line_ = c.line;
      if (auto [it, fresh] = seen.emplace(config->key, c.line); !fresh) {
        error("config " + config->key + " already set on line " + std::to_string(it->second));
        continue;
      }
      if (config->key == "target") {
        target_ = {std::get<std::string>(config->value), c.line};
        continue;
      }
      const auto* v = std::get_if<Value>(&config->value);
      if (!v) {
        error("config " + config->key + " needs a number");
        continue;
      }
      if (v->form == Value::Form::parameter) {
        error("config values cannot reference parameters");
        continue;
      }
      if (config->key == "cb") {
        in.cb = *resolve(*v);
      } else if (config->key == "cc") {
        in.cc = *resolve(*v);
      } else if (config->key == "alpha") {
        in.alpha = *resolve(*v);
      } else if (config->key == "gt") {
        if (auto x = resolve_real(*v, "gt")) in.gt = *x;
      } else if (auto t = resolve_truncation(*v)) {
        in.truncation = *t;
      }
    }
    line_ = 0;
    if (overrides_.cb) in.cb = *overrides_.cb;
    if (overrides_.cc) in.cc = *overrides_.cc;
    if (overrides_.alpha) in.alpha = *overrides_.alpha;
    if (overrides_.gt) in.gt = *overrides_.gt;
    if (overrides_.truncation) in.truncation = *overrides_.truncation;
    line_ = seen.count("cb") ? seen["cb"] : 0;
    const double norm = std::norm(in.cb) + std::norm(in.cc);
    if (std::abs(norm - 1.0) > kInputNormTolerance)
      error("inputs must satisfy |cb|^2 + |cc|^2 = 1 (got " + detail::format_number(norm) + ")");
    if (in.truncation < 2) error("truncation must be an integer >= 2");
  }

  bool declare(const std::string& name) {
    if (auto [it, fresh] = declared_.emplace(name, line_); !fresh) {
      error("name " + name + " already declared on line " + std::to_string(it->second));
      return false;
    }
    return true;
  }

  const Screen* screen(const std::string& name) {
    auto it = screens_.find(name);
    if (it == screens_.end()) {
      error("screen " + name + " is not declared");
      return nullptr;
    }
    return &program_.layout.screens[it->second];
  }

  CavityInfo* cavity(const std::string& name) {
    auto it = cavities_.find(name);
    if (it == cavities_.end()) {
      error("cavity " + name + " is not declared");
      return nullptr;
    }
    return &it->second;
  }

  AtomState* atom(const std::string& name) {
    auto it = atoms_.find(name);
    if (it == atoms_.end()) {
      error("atom " + name + " is not declared");
      return nullptr;
    }
    return &it->second;
  }

  AtomState* lambda_atom(const std::string& name) {
    auto* a = atom(name);
    if (a && a->kind != RegisterKind::lambda3) {
      error("atom " + name + " is not a lambda3 atom");
      return nullptr;
    }
    return a;
  }

  bool at_screen(const std::string& name, const AtomState& a, const std::string& screen_name) {
    if (!a.screen) {
      error("atom " + name + " has no path register here (split it first)");
      return false;
    }
    if (*a.screen != screen_name) {
      error("atom " + name + " is at screen " + *a.screen + ", not " + screen_name);
      return false;
    }
    return true;
  }

  void check(const cmd::Config&) {}

  void check(const cmd::Cavity& x) {
    if (!declare(x.name)) return;
    auto alpha = resolve(x.alpha);
    auto truncation = x.truncation ? resolve_truncation(*x.truncation) : std::optional<int>(program_.inputs.truncation);
    if (!alpha || !truncation) return;
    cavities_[x.name] = {line_, *truncation, std::abs(*alpha)};
    program_.layout.cavities.push_back({x.name, *alpha, *truncation});
  }

  void check(const cmd::Atom& x) {
    if (!declare(x.name)) return;
    if (x.state != kInputState && !valid_internal_label(x.kind, x.state))
      error("unknown label " + x.state + " (valid: " + labels_of(x.kind) + ",input)");
    atoms_[x.name] = {x.kind, std::nullopt, false};
    program_.layout.atoms.push_back({x.name, x.kind, x.state});
  }

  void check(const cmd::Screen& x) {
    if (!declare(x.name)) return;
    if (std::set<std::string>(x.slits.begin(), x.slits.end()).size() != x.slits.size())
      error("screen " + x.name + " repeats a slit label");
    screens_[x.name] = program_.layout.screens.size();
    program_.layout.screens.push_back({x.name, x.slits});
  }

  void check(const cmd::Bind& x) {
    const auto* s = screen(x.screen);
    const bool has_cavity = cavity(x.cavity) != nullptr;
    if (!s || !has_cavity) return;
    if (std::find(s->slits.begin(), s->slits.end(), x.slit) == s->slits.end()) {
      error("unknown slit " + x.slit + " of screen " + x.screen + " (valid: " + join(s->slits, ",") + ")");
      return;
    }
    if (!program_.layout.bindings.emplace(std::make_pair(x.screen, x.slit), x.cavity).second)
      error("slit " + x.slit + " of screen " + x.screen + " is already bound");
  }

  void check(const cmd::Kernel& x) {
    if (!declare(x.name)) return;
    const auto* source = screen(x.source);
    const auto* target = screen(x.target);
    if (!source || !target) return;
    const auto rows = x.rows.size();
    const auto cols = x.rows.front().size();
    if (rows != target->slits.size() || cols != source->slits.size()) {
      error("kernel " + x.name + " is " + std::to_string(rows) + "x" + std::to_string(cols) + " but " + x.source +
            " -> " + x.target + " needs " + std::to_string(target->slits.size()) + "x" +
            std::to_string(source->slits.size()));
      return;
    }
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = x.rows[i][j];
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m.col(j).norm() > 1.0 + kKernelNormTolerance)
        error("kernel column exceeds unit norm (column " + std::to_string(j + 1) + " of " + x.name + " has norm " +
              detail::format_number(m.col(j).norm()) + ")");
    program_.layout.kernels[x.name] = {x.name, x.source, x.target, std::move(m)};
  }

  void check(const cmd::Split& x) {
    auto* a = lambda_atom(x.atom);
    const auto* s = screen(x.screen);
    if (!a || !s) return;
    if (a->detected) return error("atom " + x.atom + " has already been detected");
    if (a->screen) return error("atom " + x.atom + " is already split at screen " + *a->screen);
    if (s->slits.size() != 2)
      return error("screen " + x.screen + " has " + std::to_string(s->slits.size()) + " slits; split needs 2");
    a->screen = x.screen;
    program_.steps.push_back(step::Split{x.atom, x.screen});
  }

  void check(const cmd::Pass& x) {
    auto* a = lambda_atom(x.atom);
    const auto* s = screen(x.screen);
    auto phi = resolve_real(x.phi, "phi");
    if (!a || !s || !phi) return;
    if (a->detected) return error("atom " + x.atom + " has already been detected");
    if (!at_screen(x.atom, *a, x.screen)) return;
    for (const auto& slit : s->slits)
      if (!program_.layout.bindings.count({x.screen, slit})) error("slit " + slit + " has no cavity");
    program_.steps.push_back(step::Pass{x.atom, x.screen, *phi});
  }

  void check(const cmd::Detect& x) {
    auto* a = atom(x.atom);
    if (!a) return;
    if (x.position) {
      if (!a->screen) return error("atom " + x.atom + " has no path register here (split it first)");
      const auto& slits = program_.layout.screens[screens_[*a->screen]].slits;
      if (std::find(slits.begin(), slits.end(), x.label) == slits.end())
        return error("unknown label " + x.label + " (valid: " + join(slits, ",") + ")");
      a->screen.reset();
      program_.steps.push_back(step::DetectPosition{x.atom, x.label});
      return;
    }
    if (a->detected) return error("atom " + x.atom + " has already been detected");
    if (!valid_internal_label(a->kind, x.label))
      return error("unknown label " + x.label + " (valid: " + labels_of(a->kind) + ")");
    a->detected = true;
    program_.steps.push_back(step::DetectInternal{x.atom, x.label});
  }

  void check(const cmd::Propagate& x) {
    auto* a = atom(x.atom);
    auto k = program_.layout.kernels.find(x.kernel);
    if (k == program_.layout.kernels.end()) error("kernel " + x.kernel + " is not declared");
    if (!a || k == program_.layout.kernels.end()) return;
    if (!at_screen(x.atom, *a, k->second.source_screen)) return;
    a->screen = k->second.target_screen;
    program_.steps.push_back(step::Propagate{x.atom, x.kernel});
  }

  void check(const cmd::Inject& x) {
    auto* c = cavity(x.cavity);
    auto beta = resolve(x.beta);
    if (!c || !beta) return;
    c->reach += std::abs(*beta);
    program_.steps.push_back(step::Inject{x.cavity, *beta});
  }

  void check(const cmd::JcPass& x) {
    auto* a = atom(x.atom);
    const bool has_cavity = cavity(x.cavity) != nullptr;
    auto gt = resolve_real(x.gt, "gt");
    if (!a || !has_cavity || !gt) return;
    if (a->kind != RegisterKind::qubit2) return error("atom " + x.atom + " is not a qubit2 atom");
    if (a->detected) return error("atom " + x.atom + " has already been detected");
    program_.steps.push_back(step::JcPass{x.atom, x.cavity, *gt});
  }

  void check(const cmd::Checkpoint& x) {
    if (!parse_checkpoint(x.name)) return error("unknown checkpoint " + x.name);
    program_.steps.push_back(step::Checkpoint{x.name});
  }

  void finish() {
    for (const auto& [name, c] : cavities_) {
      const int needed = minimum_truncation(c.reach);
      if (c.truncation < needed) {
        line_ = c.line;
        error("truncation " + std::to_string(c.truncation) + " of cavity " + name + " is below the tail bound " +
              std::to_string(needed) + " (|alpha| plus injected amplitude " + detail::format_number(c.reach) + ")");
      }
    }
    if (!target_) return;
    line_ = target_->second;
    const auto& name = target_->first;
    auto it = atoms_.find(name);
    if (it == atoms_.end()) return error("target atom " + name + " is not declared");
    if (!it->second.screen) return error("target atom " + name + " has no path register at the end of the script");
    const auto& slits = program_.layout.screens[screens_[*it->second.screen]].slits;
    if (slits.size() != 2) return error("target atom " + name + " must end at a two-slit screen");
    program_.layout.target_atom = name;
  }

  const ProtocolScript& script_;
  Overrides overrides_;
  int line_ = 0;
  Program program_;
  std::vector<Diagnostic> errors_;
  std::map<std::string, int> declared_;
  std::map<std::string, std::size_t> screens_;
  std::map<std::string, CavityInfo> cavities_;
  std::map<std::string, AtomState> atoms_;
  std::optional<std::pair<std::string, int>> target_;
};

}  // namespace

ValidationResult validate(const ProtocolScript& script, const Overrides& overrides) {
  Validator v(script, overrides);
  v.run();
  return std::move(v).result();
}

RunInputs resolve_inputs(const ProtocolScript& script, const Overrides& overrides) {
  Validator v(script, overrides);
  v.run();
  return v.inputs();
}

int required_truncation(const ProtocolScript& script, const Overrides& overrides) {
  Validator v(script, overrides);
  v.run();
  return v.required_truncation();
}

}  // namespace slitport::script
