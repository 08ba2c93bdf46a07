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

#include <doctest.h>

#include <numbers>

#include "slitport/fockspace.hpp"
#include "support.hpp"

namespace slitport {
namespace {

using testing::random_state;
using testing::random_unitary;
using testing::random_vector;

std::vector<Eigen::Index> digits(Eigen::Index flat, const std::vector<Register>& regs) {
  std::vector<Eigen::Index> d(regs.size());
  for (std::size_t k = regs.size(); k-- > 0;) {
    d[k] = flat % regs[k].dim();
    flat /= regs[k].dim();
  }
  return d;
}

// Full-space matrix of `op` acting on `targets`, built entry by entry from
// digit expansions. Shares no code with the block contraction.
Matrix embed(const std::vector<Register>& regs, const std::vector<std::string>& targets, const Matrix& op) {
  Eigen::Index total = 1;
  for (const auto& r : regs) total *= r.dim();
  std::vector<std::size_t> pos;
  for (const auto& t : targets)
    for (std::size_t k = 0; k < regs.size(); ++k)
      if (regs[k].name() == t) pos.push_back(k);
  Matrix full = Matrix::Zero(total, total);
  for (Eigen::Index i = 0; i < total; ++i)
    for (Eigen::Index j = 0; j < total; ++j) {
      const auto di = digits(i, regs), dj = digits(j, regs);
      bool rest_equal = true;
      for (std::size_t k = 0; k < regs.size(); ++k)
        if (std::find(pos.begin(), pos.end(), k) == pos.end() && di[k] != dj[k]) rest_equal = false;
      if (!rest_equal) continue;
      Eigen::Index a = 0, b = 0;
      for (auto k : pos) {
        a = a * regs[k].dim() + di[k];
        b = b * regs[k].dim() + dj[k];
      }
      full(i, j) = op(a, b);
    }
  return full;
}

std::vector<Register> sample_registers() {
  return {Register::lambda3("A"), Register::mode("C", 4), Register::path("P", {"z1", "z2"}), Register::qubit2("Q")};
}

TEST_CASE("registers expose labels and reject unknown ones") {
  const auto r = Register::lambda3("A1.internal");
  CHECK(r.dim() == 3);
  CHECK(r.index_of("c") == 2);
  CHECK_THROWS_WITH_AS(r.index_of("q"), doctest::Contains("unknown label q"), Error);
  CHECK_THROWS_WITH_AS(r.index_of("q"), doctest::Contains("(valid: a,b,c)"), Error);
  CHECK(Register::mode("C", 5).labels().back() == "4");
}

TEST_CASE("states reject duplicate names and wrong lengths") {
  CHECK_THROWS_AS(State({Register::qubit2("Q"), Register::qubit2("Q")}, Vector::Zero(4)), DimensionError);
  CHECK_THROWS_AS(State({Register::qubit2("Q")}, Vector::Zero(3)), DimensionError);
}

TEST_CASE("make_state builds the product of local states in row-major order") {
  const Vector c = random_vector(4);
  const auto s = make_state({Register::qubit2("Q"), Register::mode("C", 4)}, Assignment<double>{{"Q", "e"}, {"C", c}});
  CHECK(s.size() == 8);
  CHECK((s.amplitudes().head(4).norm()) == doctest::Approx(0.0));
  CHECK((s.amplitudes().tail(4) - c).norm() < 1e-15);
}

TEST_CASE("apply_op matches the dense embedded operator for every target order") {
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = random_state(sample_registers());
    const std::vector<std::vector<std::string>> choices = {{"A"}, {"C"}, {"Q", "A"}, {"P", "C"}, {"C", "Q", "A"}};
    for (const auto& targets : choices) {
      Eigen::Index d = 1;
      for (const auto& t : targets) d *= s.reg(t).dim();
      const Matrix u = random_unitary(d);
      const auto out = apply_op(s, Operator(u, true).on(targets));
      const Vector expected = embed(s.registers(), targets, u) * s.amplitudes();
      CHECK((out.amplitudes() - expected).norm() < 1e-12);
    }
  }
}

TEST_CASE("apply_controlled acts only on the pinned label") {
  const auto s = random_state(sample_registers());
  const Matrix u = random_unitary(3);
  const auto out = apply_controlled(s, Operator(u, true).on({"A"}), "P", "z2");
  // Dense: |z1><z1| x I + |z2><z2| x U on (P, A).
  Matrix pu = Matrix::Identity(6, 6);
  pu.block(3, 3, 3, 3) = u;
  const Vector expected = embed(s.registers(), {"P", "A"}, pu) * s.amplitudes();
  CHECK((out.amplitudes() - expected).norm() < 1e-12);
}

TEST_CASE("operators on disjoint registers commute") {
  for (int trial = 0; trial < 25; ++trial) {
    const auto s = random_state(sample_registers());
    const auto a = Operator(random_unitary(3), true).on({"A"});
    const auto b = Operator(random_unitary(8), true).on({"C", "Q"});
    const auto ab = apply_op(apply_op(s, a), b), ba = apply_op(apply_op(s, b), a);
    CHECK((ab.amplitudes() - ba.amplitudes()).norm() < 1e-12);
  }
}

TEST_CASE("results do not depend on the register layout") {
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = random_state(sample_registers());
    const auto op = Operator(random_unitary(6), true).on({"Q", "A"});
    const std::vector<std::string> order = {"Q", "P", "A", "C"};
    const auto direct = reorder(apply_op(s, op), order);
    const auto via = apply_op(reorder(s, order), op);
    CHECK((direct.amplitudes() - via.amplitudes()).norm() < 1e-12);

    const auto p1 = outcome_probabilities(s, "C"), p2 = outcome_probabilities(reorder(s, order), "C");
    for (std::size_t i = 0; i < p1.size(); ++i) CHECK(p1[i] == doctest::Approx(p2[i]).epsilon(1e-12));
  }
}

TEST_CASE("reorder round-trips") {
  const auto s = random_state(sample_registers());
  const auto back = reorder(reorder(s, {"C", "Q", "A", "P"}), register_names(s));
  CHECK((back.amplitudes() - s.amplitudes()).norm() == 0.0);
  CHECK_THROWS_AS(reorder(s, {"C", "C", "A", "P"}), DimensionError);
}

TEST_CASE("operators flagged unitary are checked") {
  Matrix m = Matrix::Identity(2, 2);
  m(0, 0) = 1.001;
  CHECK_THROWS_AS(Operator(m, true), Error);
  CHECK_NOTHROW(Operator(m, false));
  const auto s = random_state(sample_registers());
  CHECK_THROWS_AS(apply_op(s, Operator(Matrix::Identity(2, 2), true).on({"A"})), DimensionError);
  CHECK_THROWS_AS(apply_op(s, Operator(Matrix::Identity(3, 3), true).on({"missing"})), Error);
}

TEST_CASE("outcome probabilities sum to the squared norm") {
  for (int trial = 0; trial < 20; ++trial) {
    auto s = random_state(sample_registers());
    s = s.with_amplitudes(s.amplitudes() * 0.7);  // unnormalized, as after lossy propagation
    for (const auto& r : s.registers()) {
      double total = 0;
      for (double p : outcome_probabilities(s, r.name())) total += p;
      CHECK(total == doctest::Approx(0.49).epsilon(1e-12));
    }
  }
}

TEST_CASE("project renormalizes and reports the absolute probability") {
  auto s = random_state(sample_registers());
  s = s.with_amplitudes(s.amplitudes() * 0.5);
  const auto p = outcome_probabilities(s, "P");
  const auto [after, prob] = project(s, "P", "z2");
  CHECK(prob == doctest::Approx(p[1]).epsilon(1e-12));
  CHECK(after.norm() == doctest::Approx(1.0));
  CHECK(outcome_probabilities(after, "P")[0] == doctest::Approx(0.0));
  // Slicing the projected state keeps it normalized.
  const auto sliced = slice(after, "P", "z2");
  CHECK(sliced.registers().size() == 3);
  CHECK(sliced.norm() == doctest::Approx(1.0));
}

TEST_CASE("projecting onto a zero-weight outcome throws ImpossibleOutcome") {
  const auto s = make_state({Register::qubit2("Q"), Register::lambda3("A")}, Assignment<double>{{"Q", "f"}, {"A", "b"}});
  CHECK_THROWS_AS(project(s, "Q", "e"), ImpossibleOutcome);
  CHECK_THROWS_AS(project(s, "A", "x"), Error);
}

TEST_CASE("rebase_register applies a non-square map") {
  const auto s = make_state({Register::path("P", {"z1", "z2"}), Register::qubit2("Q")},
                            Assignment<double>{{"P", Vector::Constant(2, std::numbers::sqrt2 / 2)}, {"Q", "f"}});
  Matrix k(1, 2);
  k << 1, 0;
  const auto out = rebase_register(s, "P", Register::path("P", {"g1"}), k);
  CHECK(out.reg("P").dim() == 1);
  CHECK(out.squared_norm() == doctest::Approx(0.5));
  CHECK_THROWS_AS(rebase_register(s, "P", Register::path("P", {"g1", "g2", "g3"}), k), DimensionError);
}

TEST_CASE("fidelity is phase-blind and reduced fidelity traces out the rest") {
  const auto s = random_state(sample_registers());
  const auto phased = s.with_amplitudes(s.amplitudes() * std::polar(1.0, 0.7));
  CHECK(fidelity(s, phased) == doctest::Approx(1.0));

  const Vector target = random_vector(2);
  const auto product = make_state({Register::mode("C", 4), Register::path("P", {"z1", "z2"})},
                                  Assignment<double>{{"C", random_vector(4)}, {"P", target}});
  CHECK(reduced_fidelity(product, {"P"}, target) == doctest::Approx(1.0).epsilon(1e-12));
  Vector orth(2);
  orth << -std::conj(target[1]), std::conj(target[0]);
  CHECK(reduced_fidelity(product, {"P"}, orth) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(reduced_fidelity(product, {"P"}, Vector(Vector::Ones(2))), Error);
}

}  // namespace
}  // namespace slitport
