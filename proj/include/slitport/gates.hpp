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

// Field states and atom-field operators on a truncated Fock space.
//
// Two-register operators use the atom as the slow index and the mode as the
// fast one: row = level * truncation + n.

#ifndef SLITPORT_GATES_HPP
#define SLITPORT_GATES_HPP

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <string>

#include "slitport/fockspace.hpp"

namespace slitport {

/// Largest raw tail mass a truncated coherent state may drop.
inline constexpr double kTailMassTolerance = 1e-8;

enum class Sign { plus, minus };

/// Smallest Fock dimension that holds a coherent state of the given
/// amplitude with negligible tail: ceil(|a|^2 + 10 sqrt(|a|^2 + 1)).
inline int minimum_truncation(double amplitude_modulus) {
  const double m = amplitude_modulus * amplitude_modulus;
  return static_cast<int>(std::ceil(m + 10.0 * std::sqrt(m + 1.0)));
}

struct GateParams {
  double phi = 0;
  std::complex<double> alpha = 0;
  double gt = 0;
  int truncation = 1;

  /// Tail-bound rule for a cavity that will also be displaced by alpha.
  bool satisfies_tail_bound() const { return truncation >= minimum_truncation(2.0 * std::abs(alpha)); }
};

namespace detail {

inline void require_truncation(int truncation, int minimum = 1) {
  if (truncation < minimum)
    throw DimensionError("truncation must be >= " + std::to_string(minimum) + ", got " +
                         std::to_string(truncation));
}

/// e^{-|a|^2/2} a^n / sqrt(n!) for n < truncation, by recurrence.
template <typename Real>
Amplitudes<Real> raw_coherent(std::complex<Real> alpha, int truncation) {
  require_truncation(truncation);
  Amplitudes<Real> c(truncation);
  c[0] = std::exp(-std::norm(alpha) / Real(2));
  for (int n = 1; n < truncation; ++n) c[n] = c[n - 1] * alpha / std::sqrt(Real(n));
  return c;
}

}  // namespace detail

/// Probability mass of |alpha> above the truncation.
template <typename Real>
Real coherent_tail_mass(std::complex<Real> alpha, int truncation) {
  return std::max(Real(0), Real(1) - detail::raw_coherent(alpha, truncation).squaredNorm());
}

/// Coherent state |alpha>, renormalized over the truncated space.
/// Throws TruncationError when the dropped tail exceeds kTailMassTolerance.
template <typename Real>
Amplitudes<Real> coherent_amplitudes(std::complex<Real> alpha, int truncation) {
  auto c = detail::raw_coherent(alpha, truncation);
  const Real tail = std::max(Real(0), Real(1) - c.squaredNorm());
  if (tail > Real(kTailMassTolerance))
    throw TruncationError("coherent state with |alpha|=" + std::to_string(static_cast<double>(std::abs(alpha))) +
                          " loses " + std::to_string(static_cast<double>(tail)) + " above truncation " +
                          std::to_string(truncation));
  return c / c.norm();
}

/// Normalized even (plus) or odd (minus) cat state |alpha> +- |-alpha>.
/// Built as the parity projection of |alpha>, which is exact and keeps full
/// precision for small alpha.
template <typename Real>
Amplitudes<Real> cat_state(std::complex<Real> alpha, Sign sign, int truncation) {
  auto c = coherent_amplitudes(alpha, truncation);
  const int keep = sign == Sign::plus ? 0 : 1;
  for (int n = 0; n < truncation; ++n)
    if (n % 2 != keep) c[n] = 0;
  const Real norm = c.norm();
  if (norm == Real(0)) throw Error("odd cat state of alpha=0 is the zero vector");
  return c / norm;
}

/// exp(i pi a^dagger a) = diag((-1)^n).
template <typename Real = double>
BasicOperator<Real> parity_phase(int truncation) {
  detail::require_truncation(truncation);
  DenseMatrix<Real> m = DenseMatrix<Real>::Zero(truncation, truncation);
  for (int n = 0; n < truncation; ++n) m(n, n) = n % 2 == 0 ? Real(1) : Real(-1);
  return BasicOperator<Real>(std::move(m), true);
}

/// Pi_{+-} = (exp(i pi a^dagger a) +- 1) / 2. Not unitary.
template <typename Real = double>
BasicOperator<Real> pi_projector(Sign sign, int truncation) {
  const auto parity = parity_phase<Real>(truncation).matrix();
  const auto id = DenseMatrix<Real>::Identity(truncation, truncation);
  DenseMatrix<Real> m = sign == Sign::plus ? DenseMatrix<Real>((parity + id) / Real(2))
                                           : DenseMatrix<Real>((parity - id) / Real(2));
  return BasicOperator<Real>(std::move(m), false);
}

/// Far-detuned lambda atom in a cavity, phi = 2 g^2 tau / Delta. Acts on
/// (lambda3 {a,b,c}) x (mode):
///   -e^{i phi n} on |a><a|, (e^{i phi n} + 1)/2 on |b><b| and |c><c|,
///   (e^{i phi n} - 1)/2 on |b><c| and |c><b|.
template <typename Real = double>
BasicOperator<Real> dispersive_lambda(Real phi, int truncation) {
  detail::require_truncation(truncation);
  const Eigen::Index t = truncation;
  DenseMatrix<Real> m = DenseMatrix<Real>::Zero(3 * t, 3 * t);
  constexpr int a = 0, b = 1, c = 2;
  for (Eigen::Index n = 0; n < t; ++n) {
    const std::complex<Real> z = std::polar(Real(1), phi * Real(n));
    const std::complex<Real> same = (z + Real(1)) / Real(2);
    const std::complex<Real> swap = (z - Real(1)) / Real(2);
    m(a * t + n, a * t + n) = -z;
    m(b * t + n, b * t + n) = same;
    m(c * t + n, c * t + n) = same;
    m(b * t + n, c * t + n) = swap;
    m(c * t + n, b * t + n) = swap;
  }
  return BasicOperator<Real>(std::move(m), true);
}

namespace detail {

/// exp(beta a^dagger - beta* a) on a Fock space of the given dimension, via
/// the eigendecomposition of the Hermitian matrix i(beta a^dagger - beta* a).
template <typename Real>
DenseMatrix<Real> displacement_matrix(std::complex<Real> beta, int dim) {
  DenseMatrix<Real> generator = DenseMatrix<Real>::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) {
    const Real s = std::sqrt(Real(n));
    generator(n, n - 1) = beta * s;              // beta a^dagger
    generator(n - 1, n) = -std::conj(beta) * s;  // -beta* a
  }
  const std::complex<Real> i(0, 1);
  DenseMatrix<Real> hermitian = i * generator;
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Real>> eig(hermitian);
  const auto& v = eig.eigenvectors();
  Amplitudes<Real> phases(dim);
  for (int k = 0; k < dim; ++k) phases[k] = std::polar(Real(1), -eig.eigenvalues()[k]);
  return v * phases.asDiagonal() * v.adjoint();
}

}  // namespace detail

/// Displacement D(beta) on the truncated space (exact matrix exponential of
/// the truncated generator). Accurate for states obeying the tail bound.
template <typename Real>
BasicOperator<Real> displacement(std::complex<Real> beta, int truncation) {
  detail::require_truncation(truncation);
  return BasicOperator<Real>(detail::displacement_matrix(beta, truncation), true);
}

/// Probability mass that D(beta) would push above the truncation of `mode`
/// in `state`, measured on a space of twice the dimension.
template <typename Real>
Real displacement_leakage(const BasicState<Real>& state, const std::string& mode, std::complex<Real> beta) {
  const int t = static_cast<int>(state.reg(mode).dim());
  auto block = detail::gather(state.amplitudes(), detail::block_index(state, {mode}));
  DenseMatrix<Real> padded = DenseMatrix<Real>::Zero(2 * t, block.cols());
  padded.topRows(t) = block;
  DenseMatrix<Real> moved = detail::displacement_matrix(beta, 2 * t) * padded;
  return moved.bottomRows(t).squaredNorm();
}

/// Resonant Jaynes-Cummings evolution on (qubit2 {f,e}) x (mode):
///   |f,n> -> cos(gt sqrt n)|f,n> - i sin(gt sqrt n)|e,n-1>,
///   |e,n> -> cos(gt sqrt(n+1))|e,n> - i sin(gt sqrt(n+1))|f,n+1>.
/// |f,0> is stationary. |e,truncation-1> has no partner inside the
/// truncation and is held fixed so the matrix stays unitary.
template <typename Real = double>
BasicOperator<Real> jc_unitary(Real gt, int truncation) {
  detail::require_truncation(truncation, 2);
  const Eigen::Index t = truncation;
  constexpr int f = 0, e = 1;
  const std::complex<Real> minus_i(0, -1);
  DenseMatrix<Real> m = DenseMatrix<Real>::Zero(2 * t, 2 * t);
  m(f * t, f * t) = 1;
  m(e * t + t - 1, e * t + t - 1) = 1;
  for (Eigen::Index n = 1; n < t; ++n) {
    const Real angle = gt * std::sqrt(Real(n));
    const Real cs = std::cos(angle), sn = std::sin(angle);
    const Eigen::Index fn = f * t + n, em = e * t + n - 1;
    m(fn, fn) = cs;
    m(em, em) = cs;
    m(em, fn) = minus_i * sn;
    m(fn, em) = minus_i * sn;
  }
  return BasicOperator<Real>(std::move(m), true);
}

// double-precision shorthands, so real literals bind without spelling the
// template argument.
inline Vector coherent_amplitudes(std::complex<double> alpha, int truncation) {
  return coherent_amplitudes<double>(alpha, truncation);
}
inline double coherent_tail_mass(std::complex<double> alpha, int truncation) {
  return coherent_tail_mass<double>(alpha, truncation);
}
inline Vector cat_state(std::complex<double> alpha, Sign sign, int truncation) {
  return cat_state<double>(alpha, sign, truncation);
}
inline Operator displacement(std::complex<double> beta, int truncation) {
  return displacement<double>(beta, truncation);
}

}  // namespace slitport

#endif  // SLITPORT_GATES_HPP
