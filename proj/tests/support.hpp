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

// Hand-rolled generators and helpers shared by the test executables.

#ifndef SLITPORT_TESTS_SUPPORT_HPP
#define SLITPORT_TESTS_SUPPORT_HPP

#include <cmath>
#include <complex>
#include <random>
#include <utility>

#include "slitport/fockspace.hpp"
#include "slitport/script.hpp"

namespace slitport::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(20261017);
  return engine;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline std::complex<double> random_complex() {
  std::normal_distribution<double> n;
  return {n(rng()), n(rng())};
}

inline Vector random_vector(Eigen::Index dim) {
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = random_complex();
  return v.normalized();
}

/// Random (cb, cc) with |cb|^2 + |cc|^2 = 1 and arbitrary phases.
inline std::pair<std::complex<double>, std::complex<double>> random_inputs() {
  const Vector v = random_vector(2);
  return {v[0], v[1]};
}

inline State random_state(std::vector<Register> regs) {
  Eigen::Index total = 1;
  for (const auto& r : regs) total *= r.dim();
  return State(std::move(regs), random_vector(total));
}

inline Matrix random_unitary(Eigen::Index dim) {
  Matrix a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = random_complex();
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * Matrix::Identity(dim, dim);
}

inline script::Overrides with_inputs(std::complex<double> cb, std::complex<double> cc) {
  script::Overrides o;
  o.cb = cb;
  o.cc = cc;
  return o;
}

/// The built-in scenario, validated with the given overrides.
inline script::Program paper_program(const script::Overrides& o = {}) {
  auto parsed = script::parse(script::paper_scenario());
  auto v = script::validate(parsed.script, o);
  if (!v.ok()) throw Error("built-in scenario does not validate: " + v.errors.front().text());
  return *v.program;
}

}  // namespace slitport::testing

#endif  // SLITPORT_TESTS_SUPPORT_HPP
