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

#include "slitport/gates.hpp"
#include "support.hpp"

namespace slitport {
namespace {

// Independent coherent amplitudes: exp(-|a|^2/2) a^n / sqrt(n!) through
// log-gamma, no recurrence.
Vector poisson_amplitudes(std::complex<double> alpha, int truncation) {
  Vector v(truncation);
  const double r = std::abs(alpha), theta = std::arg(alpha);
  for (int n = 0; n < truncation; ++n) {
    const double log_mod = -r * r / 2 + (n == 0 ? 0.0 : n * std::log(r)) - std::lgamma(n + 1.0) / 2;
    v[n] = r == 0 && n > 0 ? 0.0 : std::polar(std::exp(log_mod), n * theta);
  }
  return v;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

double unitarity_defect(const Matrix& u) {
  return max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()));
}

TEST_CASE("coherent amplitudes agree with the closed form") {
  // [DERIVED] C_0 at alpha = 2 is e^-2.
  CHECK(coherent_amplitudes(2.0, 64)[0].real() == doctest::Approx(0.1353352832366127).epsilon(1e-14));
  for (std::complex<double> a : {std::complex<double>(1, 0), {2, 0}, {0, 3}, {-1.5, 0.5}}) {
    const int t = minimum_truncation(std::abs(a));
    CHECK((coherent_amplitudes(a, t) - poisson_amplitudes(a, t)).norm() < 1e-8);
  }
}

TEST_CASE("coherent_amplitudes refuses a truncation that drops the tail") {
  CHECK_THROWS_AS(coherent_amplitudes(2.0, 8), TruncationError);
  CHECK(coherent_tail_mass(2.0, 8) > 1e-8);
  CHECK(coherent_tail_mass(2.0, minimum_truncation(2.0)) < 1e-8);
}

TEST_CASE("tail-bound rule") {
  // ceil(m + 10 sqrt(m + 1)) with m = |a|^2.
  CHECK(minimum_truncation(2.0) == 27);
  CHECK(minimum_truncation(4.0) == 58);
  CHECK(GateParams{std::numbers::pi, 2.0, std::numbers::pi / 8, 64}.satisfies_tail_bound());
  CHECK_FALSE(GateParams{std::numbers::pi, 2.0, std::numbers::pi / 8, 40}.satisfies_tail_bound());
}

TEST_CASE("cat states are parity eigenstates with the closed-form norm") {
  for (double a : {1.0, 2.0, 3.0}) {
    const Vector coh = poisson_amplitudes(a, 64), flip = poisson_amplitudes(-a, 64);
    // ||a> +- |-a>||^2 = 2(1 +- e^{-2|a|^2})
    CHECK((coh + flip).squaredNorm() == doctest::Approx(2 * (1 + std::exp(-2 * a * a))).epsilon(1e-12));
    CHECK((coh - flip).squaredNorm() == doctest::Approx(2 * (1 - std::exp(-2 * a * a))).epsilon(1e-12));
    const Vector even = cat_state(a, Sign::plus, 64), odd = cat_state(a, Sign::minus, 64);
    CHECK(std::abs(even.dot(odd)) < 1e-15);
    CHECK((even - (coh + flip).normalized()).norm() < 1e-10);
  }
  CHECK_THROWS_WITH_AS(cat_state(0.0, Sign::minus, 8), doctest::Contains("zero vector"), Error);
}

TEST_CASE("parity projector algebra") {
  const int t = 64;
  const Matrix pp = pi_projector(Sign::plus, t).matrix(), pm = pi_projector(Sign::minus, t).matrix();
  const Matrix parity = parity_phase(t).matrix();
  CHECK(max_abs(pp * pp - pp) < 1e-12);
  CHECK(max_abs(pm * pm + pm) < 1e-12);  // Pi- = (P - I)/2 squares to -Pi-
  CHECK(max_abs(pp * pm) < 1e-12);
  CHECK(max_abs(pp + pm - parity) < 1e-12);
  CHECK(max_abs(pp - pm - Matrix::Identity(t, t)) < 1e-12);
  for (double a : {1.0, 2.0, 3.0}) {
    const Vector plus = cat_state(a, Sign::plus, t), minus = cat_state(a, Sign::minus, t);
    CHECK((pp * plus - plus).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((pm * minus + minus).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((pp * minus).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((pm * plus).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("dispersive gate is unitary for random phases") {
  for (int trial = 0; trial < 100; ++trial) {
    const double phi = testing::uniform(-10, 10);
    CHECK(unitarity_defect(dispersive_lambda(phi, 16).matrix()) < 1e-12);
  }
  CHECK(unitarity_defect(dispersive_lambda(std::numbers::pi, 64).matrix()) < 1e-12);
}

TEST_CASE("dispersive gate at phi = pi splits a coherent field into cats") {
  const int t = 64;
  const std::complex<double> alpha = 2.0;
  const auto s = make_state({Register::lambda3("A"), Register::mode("C", t)},
                            Assignment<double>{{"A", "b"}, {"C", coherent_amplitudes(alpha, t)}});
  const auto out = apply_op(s, dispersive_lambda(std::numbers::pi, t).on({"A", "C"}));
  // U|b>|a> = 1/2 (|b>(|a> + |-a>) - |c>(|a> - |-a>))
  const Vector coh = coherent_amplitudes(alpha, t), flip = coherent_amplitudes(-alpha, t);
  Vector expected = Vector::Zero(3 * t);
  expected.segment(t, t) = (coh + flip) / 2.0;
  expected.segment(2 * t, t) = -(coh - flip) / 2.0;
  CHECK((out.amplitudes() - expected).norm() < 1e-12);

  // Through an even cat nothing happens; through an odd cat b -> -c, c -> -b.
  const Vector plus = cat_state(alpha, Sign::plus, t), minus = cat_state(alpha, Sign::minus, t);
  const auto u = dispersive_lambda(std::numbers::pi, t);
  for (const char* level : {"b", "c"}) {
    const auto even = make_state({Register::lambda3("A"), Register::mode("C", t)}, Assignment<double>{{"A", level}, {"C", plus}});
    CHECK((apply_op(even, u.on({"A", "C"})).amplitudes() - even.amplitudes()).norm() < 1e-12);
    const auto odd = make_state({Register::lambda3("A"), Register::mode("C", t)}, Assignment<double>{{"A", level}, {"C", minus}});
    const auto flipped =
        make_state({Register::lambda3("A"), Register::mode("C", t)},
                   Assignment<double>{{"A", std::string(level) == "b" ? "c" : "b"}, {"C", Vector(-minus)}});
    CHECK((apply_op(odd, u.on({"A", "C"})).amplitudes() - flipped.amplitudes()).norm() < 1e-12);
  }
}

TEST_CASE("JC evolution is unitary and conserves excitations") {
  for (int trial = 0; trial < 100; ++trial) {
    const double gt = testing::uniform(0, 4);
    CHECK(unitarity_defect(jc_unitary(gt, 24).matrix()) < 1e-12);
  }
  const int t = 24;
  for (int trial = 0; trial < 20; ++trial) {
    // Keep |e, t-1> empty: its partner lies outside the truncation.
    Vector v = testing::random_vector(2 * t);
    v[2 * t - 1] = 0;
    v.normalize();
    const State s({Register::qubit2("Q"), Register::mode("C", t)}, v);
    const auto out = apply_op(s, jc_unitary(testing::uniform(0, 3), t).on({"Q", "C"}));
    auto excitations = [&](const Vector& a) {
      double total = 0;
      for (int n = 0; n < t; ++n) total += std::norm(a[n]) * n + std::norm(a[t + n]) * (n + 1);
      return total;
    };
    CHECK(excitations(out.amplitudes()) == doctest::Approx(excitations(v)).epsilon(1e-12));
  }
  // |f,0> is stationary.
  const Vector f0 = jc_unitary(1.3, t).matrix().col(0);
  CHECK(std::abs(f0[0] - 1.0) < 1e-15);
}

TEST_CASE("displacement creates coherent states and inverts exactly") {
  const int t = 64;
  for (std::complex<double> beta : {std::complex<double>(2, 0), {0, 2}, {1.5, -1}}) {
    const Matrix d = displacement(beta, t).matrix();
    CHECK(unitarity_defect(d) < 1e-12);
    const Vector vacuum = Vector::Unit(t, 0);
    CHECK((d * vacuum - poisson_amplitudes(beta, t)).norm() < 1e-8);
    const Matrix round = d * displacement(-beta, t).matrix();
    CHECK(max_abs(round - Matrix::Identity(t, t)) < 1e-8);
  }
  // D(a)(|a> +- |-a>) = |2a> +- |0>
  const Vector moved = displacement(2.0, t).matrix() * (coherent_amplitudes(2.0, t) + coherent_amplitudes(-2.0, t));
  CHECK((moved - (poisson_amplitudes(4.0, t) + Vector::Unit(t, 0))).norm() < 1e-8);
}

TEST_CASE("displacement leakage flags fields pushed past the truncation") {
  const auto s = make_state({Register::mode("C", 30)}, Assignment<double>{{"C", coherent_amplitudes(2.0, 30)}});
  CHECK(displacement_leakage(s, "C", std::complex<double>(0.1, 0)) < 1e-8);
  CHECK(displacement_leakage(s, "C", std::complex<double>(3.0, 0)) > 1e-8);
}

TEST_CASE("gates instantiate at other precisions") {
  const auto u = dispersive_lambda<long double>(0.3L, 8);
  CHECK(static_cast<double>(u.matrix().cwiseAbs().maxCoeff()) <= 1.0 + 1e-15);
  const auto c = coherent_amplitudes<float>(std::complex<float>(1.0f, 0.0f), 20);
  CHECK(std::abs(c[0] - std::exp(-0.5f)) < 1e-5f);
}

}  // namespace
}  // namespace slitport
