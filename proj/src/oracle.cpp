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

#include "slitport/oracle.hpp"

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "slitport/gates.hpp"
#include "slitport/names.hpp"

namespace slitport {
namespace {

using Factors = std::map<std::string, Vector>;

/// Sum of product kets over a fixed register list.
class KetSum {
 public:
  explicit KetSum(std::vector<Register> registers) : registers_(std::move(registers)) {
    Eigen::Index total = 1;
    for (const auto& r : registers_) total *= r.dim();
    sum_ = Vector::Zero(total);
  }

  void add(std::complex<double> coefficient, const Factors& factors) {
    if (factors.size() != registers_.size()) throw Error("oracle term does not cover every register");
    Vector term = Vector::Ones(1) * coefficient;
    for (const auto& r : registers_) term = detail::kron<double>(term, factors.at(r.name()));
    sum_ += term;
  }

  State normalized() const { return State(registers_, sum_).normalized(); }

 private:
  std::vector<Register> registers_;
  Vector sum_;
};

Vector basis(Eigen::Index dim, Eigen::Index index) {
  Vector v = Vector::Zero(dim);
  v[index] = 1;
  return v;
}

// Label indices fixed by the register constructors.
constexpr int kA = 0, kB = 1, kC = 2;
constexpr int kF = 0, kE = 1;

Vector level(int index) { return basis(3, index); }
Vector probe_level(int index) { return basis(2, index); }
Vector slit(int index) { return basis(2, index); }

Register slit_register(std::string_view atom) {
  return Register::path(path_register(atom), {std::string(scenario::kSlit1), std::string(scenario::kSlit2)});
}

/// Field kets used by the scenario: the initial coherent state, the
/// unnormalized cats |alpha> +- |-alpha>, and |2 alpha> +- |0> after the
/// injection.
struct Fields {
  Vector coherent, even, odd, doubled_plus, doubled_minus, chi_f, chi_e;
  int truncation;

  explicit Fields(const OracleInputs& in) : truncation(in.truncation) {
    coherent = coherent_amplitudes(in.alpha, in.truncation);
    const Vector flipped = coherent_amplitudes(-in.alpha, in.truncation);
    even = coherent + flipped;
    odd = coherent - flipped;
    const Vector twice = coherent_amplitudes(2.0 * in.alpha, in.truncation);
    const Vector vacuum = basis(in.truncation, 0);
    doubled_plus = twice + vacuum;
    doubled_minus = twice - vacuum;
    // Resonant JC acting on f x |2 alpha>: the f branch keeps C_n cos(gt sqrt n)
    // on |n>, the e branch carries -i C_{n+1} sin(gt sqrt(n+1)) on |n>.
    chi_f = Vector::Zero(in.truncation);
    chi_e = Vector::Zero(in.truncation);
    for (int n = 0; n < in.truncation; ++n) chi_f[n] = twice[n] * std::cos(in.gt * std::sqrt(double(n)));
    for (int n = 0; n + 1 < in.truncation; ++n)
      chi_e[n] = std::complex<double>(0, -1) * twice[n + 1] * std::sin(in.gt * std::sqrt(double(n + 1)));
  }
};

const std::string C1(scenario::kCavity1), C2(scenario::kCavity2);

State a1_split(const Fields& f) {
  KetSum ket({Register::mode(C1, f.truncation), Register::mode(C2, f.truncation), slit_register("A1"),
              Register::lambda3(internal_register("A1"))});
  for (int s : {0, 1})
    ket.add(1.0, {{C1, f.coherent}, {C2, f.coherent}, {path_register("A1"), slit(s)}, {internal_register("A1"), level(kB)}});
  return ket.normalized();
}

State a1_after_cavities(const Fields& f) {
  KetSum ket({Register::mode(C1, f.truncation), Register::mode(C2, f.truncation), slit_register("A1"),
              Register::lambda3(internal_register("A1"))});
  const auto p = path_register("A1"), i = internal_register("A1");
  // zeta11 (|b>|+>_1 - |c>|->_1)|alpha>_2 + zeta12 (|b>|+>_2 - |c>|->_2)|alpha>_1
  ket.add(1.0, {{p, slit(0)}, {i, level(kB)}, {C1, f.even}, {C2, f.coherent}});
  ket.add(-1.0, {{p, slit(0)}, {i, level(kC)}, {C1, f.odd}, {C2, f.coherent}});
  ket.add(1.0, {{p, slit(1)}, {i, level(kB)}, {C2, f.even}, {C1, f.coherent}});
  ket.add(-1.0, {{p, slit(1)}, {i, level(kC)}, {C2, f.odd}, {C1, f.coherent}});
  return ket.normalized();
}

State a12_after_cavities(const Fields& f) {
  KetSum ket({Register::mode(C1, f.truncation), Register::mode(C2, f.truncation), slit_register("A1"),
              Register::lambda3(internal_register("A1")), slit_register("A2"),
              Register::lambda3(internal_register("A2"))});
  const auto p1 = path_register("A1"), i1 = internal_register("A1");
  const auto p2 = path_register("A2"), i2 = internal_register("A2");
  // Both atoms through the same cavity k: (1/2)(|b1 b2>|+>_k + |c1 c2>|->_k)|alpha>_other.
  for (int k : {0, 1}) {
    const auto& here = k == 0 ? C1 : C2;
    const auto& other = k == 0 ? C2 : C1;
    ket.add(0.5, {{p1, slit(k)}, {p2, slit(k)}, {i1, level(kB)}, {i2, level(kB)}, {here, f.even}, {other, f.coherent}});
    ket.add(0.5, {{p1, slit(k)}, {p2, slit(k)}, {i1, level(kC)}, {i2, level(kC)}, {here, f.odd}, {other, f.coherent}});
  }
  // Different cavities: (1/4)(|b1>|+>_j - |c1>|->_j)(|b2>|+>_k - |c2>|->_k).
  for (int j : {0, 1}) {
    const int k = 1 - j;
    const auto& cav1 = j == 0 ? C1 : C2;
    const auto& cav2 = k == 0 ? C1 : C2;
    for (int l1 : {kB, kC})
      for (int l2 : {kB, kC}) {
        const double sign = (l1 == kC ? -1.0 : 1.0) * (l2 == kC ? -1.0 : 1.0);
        ket.add(0.25 * sign, {{p1, slit(j)},
                              {p2, slit(k)},
                              {i1, level(l1)},
                              {i2, level(l2)},
                              {cav1, l1 == kB ? f.even : f.odd},
                              {cav2, l2 == kB ? f.even : f.odd}});
      }
  }
  return ket.normalized();
}

// The two surviving branches after detecting c on A1 and b on A2:
//   X = zeta21 zeta12 |->_2 |+>_1,   Y = zeta22 zeta11 |->_1 |+>_2.
Factors branch_x(const Fields& f) {
  return {{path_register("A1"), slit(1)}, {path_register("A2"), slit(0)}, {C1, f.even}, {C2, f.odd}};
}
Factors branch_y(const Fields& f) {
  return {{path_register("A1"), slit(0)}, {path_register("A2"), slit(1)}, {C1, f.odd}, {C2, f.even}};
}

Factors with(Factors base, std::initializer_list<std::pair<const std::string, Vector>> extra) {
  for (const auto& [k, v] : extra) base[k] = v;
  return base;
}

Factors without(Factors base, const std::string& name) {
  base.erase(name);
  return base;
}

std::vector<Register> a12_paths(const Fields& f) {
  return {Register::mode(C1, f.truncation), Register::mode(C2, f.truncation), slit_register("A1"), slit_register("A2")};
}

State a12_post_c1b2(const Fields& f) {
  KetSum ket(a12_paths(f));
  ket.add(1.0, branch_x(f));
  ket.add(1.0, branch_y(f));
  return ket.normalized();
}

State a123_after_cavities(const OracleInputs& in, const Fields& f) {
  auto regs = a12_paths(f);
  regs.push_back(slit_register("A3"));
  regs.push_back(Register::lambda3(internal_register("A3")));
  KetSum ket(regs);
  const auto p3 = path_register("A3"), i3 = internal_register("A3");
  // A3 starts in cb|b> - cc|c>. Through a cavity holding |+> it is unchanged;
  // through |-> it becomes -cb|c> + cc|b>.
  auto unchanged = [&](const Factors& br, int s) {
    ket.add(in.cb, with(br, {{p3, slit(s)}, {i3, level(kB)}}));
    ket.add(-in.cc, with(br, {{p3, slit(s)}, {i3, level(kC)}}));
  };
  auto flipped = [&](const Factors& br, int s) {
    ket.add(-in.cb, with(br, {{p3, slit(s)}, {i3, level(kC)}}));
    ket.add(in.cc, with(br, {{p3, slit(s)}, {i3, level(kB)}}));
  };
  unchanged(branch_x(f), 0);  // C1 holds |+> in X
  flipped(branch_y(f), 0);    // C1 holds |-> in Y
  flipped(branch_x(f), 1);    // C2 holds |-> in X
  unchanged(branch_y(f), 1);  // C2 holds |+> in Y
  return ket.normalized();
}

State a123_post_b3(const OracleInputs& in, const Fields& f) {
  auto regs = a12_paths(f);
  regs.push_back(slit_register("A3"));
  KetSum ket(regs);
  const auto p3 = path_register("A3");
  ket.add(in.cb, with(branch_x(f), {{p3, slit(0)}}));
  ket.add(in.cc, with(branch_y(f), {{p3, slit(0)}}));
  ket.add(in.cc, with(branch_x(f), {{p3, slit(1)}}));
  ket.add(in.cb, with(branch_y(f), {{p3, slit(1)}}));
  return ket.normalized();
}

State a123_post_zeta31(const OracleInputs& in, const Fields& f) {
  KetSum ket(a12_paths(f));
  ket.add(in.cb, branch_x(f));
  ket.add(in.cc, branch_y(f));
  return ket.normalized();
}

std::vector<Register> telep1_registers(const Fields& f) {
  return {Register::mode(C1, f.truncation), Register::mode(C2, f.truncation), slit_register("A2")};
}

State telepst1(const OracleInputs& in, const Fields& f) {
  KetSum ket(telep1_registers(f));
  ket.add(in.cb, without(branch_x(f), path_register("A1")));
  ket.add(in.cc, without(branch_y(f), path_register("A1")));
  return ket.normalized();
}

// After A2's path is gone the branches are tagged by A4's path instead.
Factors branch_x4(const Fields& f, int slit4) {
  return {{path_register("A4"), slit(slit4)}, {C1, f.even}, {C2, f.odd}};
}
Factors branch_y4(const Fields& f, int slit4) {
  return {{path_register("A4"), slit(slit4)}, {C1, f.odd}, {C2, f.even}};
}

State a24_after_cavities(const OracleInputs& in, const Fields& f) {
  auto regs = telep1_registers(f);
  regs.push_back(slit_register("A4"));
  regs.push_back(Register::lambda3(internal_register("A4")));
  KetSum ket(regs);
  const auto p2 = path_register("A2"), i4 = internal_register("A4");
  ket.add(in.cb, with(branch_x4(f, 0), {{p2, slit(0)}, {i4, level(kB)}}));
  ket.add(-in.cc, with(branch_y4(f, 0), {{p2, slit(1)}, {i4, level(kC)}}));
  ket.add(-in.cb, with(branch_x4(f, 1), {{p2, slit(0)}, {i4, level(kC)}}));
  ket.add(in.cc, with(branch_y4(f, 1), {{p2, slit(1)}, {i4, level(kB)}}));
  return ket.normalized();
}

State a24_post_rho1(const OracleInputs& in, const Fields& f) {
  KetSum ket({Register::mode(C1, f.truncation), Register::mode(C2, f.truncation), slit_register("A4"),
              Register::lambda3(internal_register("A4"))});
  const auto i4 = internal_register("A4");
  ket.add(in.cb, with(branch_x4(f, 0), {{i4, level(kB)}}));
  ket.add(-in.cc, with(branch_y4(f, 0), {{i4, level(kC)}}));
  ket.add(-in.cb, with(branch_x4(f, 1), {{i4, level(kC)}}));
  ket.add(in.cc, with(branch_y4(f, 1), {{i4, level(kB)}}));
  return ket.normalized();
}

std::vector<Register> telep2_registers(const Fields& f) {
  return {Register::mode(C1, f.truncation), Register::mode(C2, f.truncation), slit_register("A4")};
}

State telepst2(const OracleInputs& in, const Fields& f) {
  KetSum ket(telep2_registers(f));
  ket.add(in.cb, branch_x4(f, 0));
  ket.add(in.cc, branch_y4(f, 1));
  return ket.normalized();
}

State post_injection(const OracleInputs& in, const Fields& f) {
  KetSum ket(telep2_registers(f));
  const auto p4 = path_register("A4");
  ket.add(in.cb, {{p4, slit(0)}, {C1, f.doubled_plus}, {C2, f.doubled_minus}});
  ket.add(in.cc, {{p4, slit(1)}, {C1, f.doubled_minus}, {C2, f.doubled_plus}});
  return ket.normalized();
}

State post_jc(const OracleInputs& in, const Fields& f) {
  auto regs = telep2_registers(f);
  const std::string probe1 = internal_register(scenario::kProbe1), probe2 = internal_register(scenario::kProbe2);
  regs.push_back(Register::qubit2(probe1));
  regs.push_back(Register::qubit2(probe2));
  KetSum ket(regs);
  const Vector vacuum = basis(f.truncation, 0);
  // f x (|2a> +- |0>)  ->  e x chi_e + f x chi_f +- f x |0>
  struct Piece {
    int probe;
    Vector field;
    double sign;
  };
  auto pieces = [&](double vacuum_sign) {
    return std::vector<Piece>{{kE, f.chi_e, 1.0}, {kF, f.chi_f, 1.0}, {kF, vacuum, vacuum_sign}};
  };
  auto add_branch = [&](std::complex<double> c, int slit4, double sign1, double sign2) {
    for (const auto& a : pieces(sign1))
      for (const auto& b : pieces(sign2))
        ket.add(c * a.sign * b.sign, {{path_register("A4"), slit(slit4)},
                                      {C1, a.field},
                                      {C2, b.field},
                                      {probe1, probe_level(a.probe)},
                                      {probe2, probe_level(b.probe)}});
  };
  add_branch(in.cb, 0, +1.0, -1.0);
  add_branch(in.cc, 1, -1.0, +1.0);
  return ket.normalized();
}

State final_state(const OracleInputs& in) {
  Vector v(2);
  v << in.cb, in.cc;
  return State({slit_register("A4")}, v).normalized();
}

}  // namespace

const std::array<CheckpointId, kCheckpointCount>& all_checkpoints() {
  static const std::array<CheckpointId, kCheckpointCount> ids = {
      CheckpointId::A1_split,         CheckpointId::A1_after_cavities,  CheckpointId::A12_after_cavities,
      CheckpointId::A12_post_c1b2,    CheckpointId::A123_after_cavities, CheckpointId::A123_post_b3,
      CheckpointId::A123_post_zeta31, CheckpointId::A12_pre_SC3,         CheckpointId::A2_post_gamma1,
      CheckpointId::TELEPST1,         CheckpointId::A24_after_cavities,  CheckpointId::A24_post_rho1,
      CheckpointId::A24_post_b4,      CheckpointId::TELEPST2,            CheckpointId::POST_INJECTION,
      CheckpointId::POST_JC,          CheckpointId::FINAL,
  };
  return ids;
}

std::string_view to_string(CheckpointId id) {
  switch (id) {
    case CheckpointId::A1_split: return "A1_split";
    case CheckpointId::A1_after_cavities: return "A1_after_cavities";
    case CheckpointId::A12_after_cavities: return "A12_after_cavities";
    case CheckpointId::A12_post_c1b2: return "A12_post_c1b2";
    case CheckpointId::A123_after_cavities: return "A123_after_cavities";
    case CheckpointId::A123_post_b3: return "A123_post_b3";
    case CheckpointId::A123_post_zeta31: return "A123_post_zeta31";
    case CheckpointId::A12_pre_SC3: return "A12_pre_SC3";
    case CheckpointId::A2_post_gamma1: return "A2_post_gamma1";
    case CheckpointId::TELEPST1: return "TELEPST1";
    case CheckpointId::A24_after_cavities: return "A24_after_cavities";
    case CheckpointId::A24_post_rho1: return "A24_post_rho1";
    case CheckpointId::A24_post_b4: return "A24_post_b4";
    case CheckpointId::TELEPST2: return "TELEPST2";
    case CheckpointId::POST_INJECTION: return "POST_INJECTION";
    case CheckpointId::POST_JC: return "POST_JC";
    case CheckpointId::FINAL: return "FINAL";
  }
  return "?";
}

std::optional<CheckpointId> parse_checkpoint(std::string_view name) {
  for (auto id : all_checkpoints())
    if (to_string(id) == name) return id;
  return std::nullopt;
}

State expected_state(CheckpointId id, const OracleInputs& in) {
  const double weight = std::norm(in.cb) + std::norm(in.cc);
  if (std::abs(weight - 1.0) > kInputNormTolerance) throw Error("oracle inputs: |cb|^2 + |cc|^2 must be 1");
  const Fields f(in);
  switch (id) {
    case CheckpointId::A1_split: return a1_split(f);
    case CheckpointId::A1_after_cavities: return a1_after_cavities(f);
    case CheckpointId::A12_after_cavities: return a12_after_cavities(f);
    case CheckpointId::A12_post_c1b2: return a12_post_c1b2(f);
    case CheckpointId::A123_after_cavities: return a123_after_cavities(in, f);
    case CheckpointId::A123_post_b3: return a123_post_b3(in, f);
    case CheckpointId::A123_post_zeta31:
    case CheckpointId::A12_pre_SC3: return a123_post_zeta31(in, f);
    case CheckpointId::A2_post_gamma1:
    case CheckpointId::TELEPST1: return telepst1(in, f);
    case CheckpointId::A24_after_cavities: return a24_after_cavities(in, f);
    case CheckpointId::A24_post_rho1: return a24_post_rho1(in, f);
    case CheckpointId::A24_post_b4:
    case CheckpointId::TELEPST2: return telepst2(in, f);
    case CheckpointId::POST_INJECTION: return post_injection(in, f);
    case CheckpointId::POST_JC: return post_jc(in, f);
    case CheckpointId::FINAL: return final_state(in);
  }
  throw Error("unknown checkpoint");
}

double checkpoint_fidelity(const State& engine, const State& expected) {
  std::set<std::string> have, want;
  for (const auto& r : engine.registers()) have.insert(r.name());
  for (const auto& r : expected.registers()) {
    if (!have.count(r.name())) throw DimensionError("checkpoint register " + r.name() + " is not in the engine state");
    if (engine.reg(r.name()) != r) throw DimensionError("checkpoint register " + r.name() + " has a different basis");
    want.insert(r.name());
  }
  if (want == have) return fidelity(engine, reorder(expected, register_names(engine)));
  return reduced_fidelity(engine, register_names(expected), expected.normalized().amplitudes());
}

double jc_excited_probability(double mean_n, double gt, int truncation) {
  if (mean_n < 0) throw Error("mean photon number must be non-negative");
  const Vector c = coherent_amplitudes(std::sqrt(mean_n), truncation);
  double p = 0;
  for (int n = 0; n < truncation; ++n) {
    const double s = std::sin(gt * std::sqrt(double(n)));
    p += std::norm(c[n]) * s * s;
  }
  return p;
}

}  // namespace slitport
