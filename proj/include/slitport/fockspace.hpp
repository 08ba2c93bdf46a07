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

// Dense state vectors over a tensor product of named registers.
//
// Layout convention: registers are stored in order and the amplitude index
// is row-major over them, i.e. the last register varies fastest. Every
// module agrees on this; reorder() is the only way to change it.

#ifndef SLITPORT_FOCKSPACE_HPP
#define SLITPORT_FOCKSPACE_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "slitport/error.hpp"

namespace slitport {

template <typename Real>
using Amplitudes = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using DenseMatrix =
    Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

/// Branches lighter than this are treated as impossible outcomes.
inline constexpr double kImpossibleOutcomeThreshold = 1e-14;

/// Tolerance of the unitarity check on operators flagged unitary.
inline constexpr double kUnitarityTolerance = 1e-12;

/// Tolerance on the norm of amplitude vectors handed to make_state.
inline constexpr double kInputNormTolerance = 1e-9;

enum class RegisterKind { path, lambda3, qubit2, mode };

inline std::string_view to_string(RegisterKind kind) {
  switch (kind) {
    case RegisterKind::path:
      return "path";
    case RegisterKind::lambda3:
      return "lambda3";
    case RegisterKind::qubit2:
      return "qubit2";
    case RegisterKind::mode:
      return "mode";
  }
  return "?";
}

/// A named degree of freedom with an ordered list of basis labels.
class Register {
 public:
  static Register path(std::string name, std::vector<std::string> labels) {
    return Register(std::move(name), RegisterKind::path, std::move(labels));
  }
  /// Lambda atom: upper level a, degenerate lower levels b and c.
  static Register lambda3(std::string name) {
    return Register(std::move(name), RegisterKind::lambda3, {"a", "b", "c"});
  }
  /// Two-level atom: lower level f, upper level e.
  static Register qubit2(std::string name) {
    return Register(std::move(name), RegisterKind::qubit2, {"f", "e"});
  }
  /// Truncated Fock space |0>..|dim-1>.
  static Register mode(std::string name, int dim) {
    if (dim < 1) throw DimensionError("mode " + name + ": dimension must be >= 1");
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(dim));
    for (int n = 0; n < dim; ++n) labels.push_back(std::to_string(n));
    return Register(std::move(name), RegisterKind::mode, std::move(labels));
  }

  const std::string& name() const { return name_; }
  RegisterKind kind() const { return kind_; }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<Eigen::Index> find(std::string_view label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<Eigen::Index>(it - labels_.begin());
  }

  Eigen::Index index_of(std::string_view label) const {
    if (auto i = find(label)) return *i;
    std::string valid;
    for (const auto& l : labels_) valid += (valid.empty() ? "" : ",") + l;
    throw Error("unknown label " + std::string(label) + " for register " +
                name_ + " (valid: " + valid + ")");
  }

  bool operator==(const Register&) const = default;

 private:
  Register(std::string name, RegisterKind kind, std::vector<std::string> labels)
      : name_(std::move(name)), kind_(kind), labels_(std::move(labels)) {
    if (name_.empty()) throw DimensionError("register name must not be empty");
    if (labels_.empty())
      throw DimensionError("register " + name_ + " has no basis labels");
    std::set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size())
      throw DimensionError("register " + name_ + " has duplicate labels");
  }

  std::string name_;
  RegisterKind kind_;
  std::vector<std::string> labels_;
};

namespace detail {

using Index = Eigen::Index;

/// Flat offsets of every multi-index over `dims`, row-major, given the
/// stride each digit contributes.
inline std::vector<Index> enumerate_offsets(const std::vector<Index>& dims,
                                            const std::vector<Index>& strides,
                                            Index start = 0) {
  std::vector<Index> out{start};
  for (std::size_t k = 0; k < dims.size(); ++k) {
    std::vector<Index> next;
    next.reserve(out.size() * static_cast<std::size_t>(dims[k]));
    for (Index o : out)
      for (Index d = 0; d < dims[k]; ++d) next.push_back(o + d * strides[k]);
    out.swap(next);
  }
  return out;
}

inline std::vector<Index> row_major_strides(const std::vector<Register>& regs) {
  std::vector<Index> strides(regs.size(), 1);
  for (std::size_t k = regs.size(); k-- > 1;)
    strides[k - 1] = strides[k] * regs[k].dim();
  return strides;
}

}  // namespace detail

/// Normalized (or, between a lossy propagation and the next detection,
/// sub-normalized) amplitude vector over an ordered list of registers.
template <typename Real>
class BasicState {
 public:
  using Scalar = std::complex<Real>;
  using Vector = Amplitudes<Real>;

  BasicState(std::vector<Register> registers, Vector amplitudes,
             Real norm_tolerance = Real(1e-10))
      : registers_(std::move(registers)),
        amplitudes_(std::move(amplitudes)),
        norm_tolerance_(norm_tolerance) {
    std::set<std::string> names;
    Eigen::Index total = 1;
    for (const auto& r : registers_) {
      if (!names.insert(r.name()).second)
        throw DimensionError("duplicate register name " + r.name());
      total *= r.dim();
    }
    if (amplitudes_.size() != total)
      throw DimensionError("amplitude vector has length " +
                           std::to_string(amplitudes_.size()) + ", expected " +
                           std::to_string(total));
  }

  const std::vector<Register>& registers() const { return registers_; }
  const Vector& amplitudes() const { return amplitudes_; }
  Eigen::Index size() const { return amplitudes_.size(); }
  Real norm() const { return amplitudes_.norm(); }
  Real squared_norm() const { return amplitudes_.squaredNorm(); }
  Real norm_tolerance() const { return norm_tolerance_; }
  bool is_normalized() const { return std::abs(norm() - Real(1)) < norm_tolerance_; }

  std::optional<std::size_t> position(std::string_view name) const {
    for (std::size_t k = 0; k < registers_.size(); ++k)
      if (registers_[k].name() == name) return k;
    return std::nullopt;
  }
  bool has(std::string_view name) const { return position(name).has_value(); }

  std::size_t position_of(std::string_view name) const {
    if (auto k = position(name)) return *k;
    throw DimensionError("no register named " + std::string(name));
  }
  const Register& reg(std::string_view name) const { return registers_[position_of(name)]; }

  std::vector<Eigen::Index> strides() const { return detail::row_major_strides(registers_); }

  BasicState normalized() const {
    Real n = norm();
    if (n == Real(0)) throw ImpossibleOutcome("cannot normalize the zero state");
    return BasicState(registers_, amplitudes_ / n, norm_tolerance_);
  }

  BasicState with_amplitudes(Vector amplitudes) const {
    return BasicState(registers_, std::move(amplitudes), norm_tolerance_);
  }

 private:
  std::vector<Register> registers_;
  Vector amplitudes_;
  Real norm_tolerance_;
};

/// Dense matrix plus the (ordered) registers it acts on. Gate constructors
/// return unbound operators; bind them with on().
template <typename Real>
class BasicOperator {
 public:
  using Matrix = DenseMatrix<Real>;

  BasicOperator(Matrix matrix, bool unitary, std::vector<std::string> targets = {})
      : matrix_(std::move(matrix)), unitary_(unitary), targets_(std::move(targets)) {
    if (matrix_.rows() != matrix_.cols())
      throw DimensionError("operator matrix must be square");
    if (unitary_) {
      Matrix defect = matrix_.adjoint() * matrix_ - Matrix::Identity(matrix_.rows(), matrix_.cols());
      Real worst = defect.cwiseAbs().maxCoeff();
      if (!(worst < Real(kUnitarityTolerance)))
        throw Error("operator flagged unitary deviates from unitarity by " +
                    std::to_string(static_cast<double>(worst)));
    }
  }

  BasicOperator on(std::vector<std::string> targets) const {
    return BasicOperator(matrix_, unitary_, std::move(targets), Unchecked{});
  }
  BasicOperator on(std::initializer_list<std::string> targets) const {
    return on(std::vector<std::string>(targets));
  }

  const Matrix& matrix() const { return matrix_; }
  bool is_unitary() const { return unitary_; }
  const std::vector<std::string>& targets() const { return targets_; }
  Eigen::Index dim() const { return matrix_.rows(); }

 private:
  struct Unchecked {};
  BasicOperator(Matrix matrix, bool unitary, std::vector<std::string> targets, Unchecked)
      : matrix_(std::move(matrix)), unitary_(unitary), targets_(std::move(targets)) {}

  Matrix matrix_;
  bool unitary_;
  std::vector<std::string> targets_;
};

using State = BasicState<double>;
using Operator = BasicOperator<double>;
using Vector = Amplitudes<double>;
using Matrix = DenseMatrix<double>;

template <typename Real>
using Assignment = std::map<std::string, std::variant<std::string, Amplitudes<Real>>>;

template <typename Real>
struct BasicProjection {
  BasicState<Real> state;
  Real probability;
};
using Projection = BasicProjection<double>;

namespace detail {

/// Splits the flat index space of `state` into target offsets (row-major in
/// the order `targets` are given) and the base offsets of every
/// configuration of the remaining registers. A control register, when
/// given, is pinned to one label.
struct BlockIndex {
  std::vector<Index> inner;
  std::vector<Index> outer;
};

template <typename Real>
BlockIndex block_index(const BasicState<Real>& state,
                             const std::vector<std::string>& targets,
                             std::optional<std::pair<std::string, Index>> control = {}) {
  const auto& regs = state.registers();
  const auto strides = state.strides();
  std::vector<bool> used(regs.size(), false);
  std::vector<Index> tdims, tstrides;
  for (const auto& name : targets) {
    std::size_t k = state.position_of(name);
    if (used[k]) throw DimensionError("register " + name + " targeted twice");
    used[k] = true;
    tdims.push_back(regs[k].dim());
    tstrides.push_back(strides[k]);
  }
  Index start = 0;
  if (control) {
    std::size_t k = state.position_of(control->first);
    if (used[k]) throw DimensionError("control register " + control->first + " is also a target");
    used[k] = true;
    start = control->second * strides[k];
  }
  std::vector<Index> odims, ostrides;
  for (std::size_t k = 0; k < regs.size(); ++k) {
    if (used[k]) continue;
    odims.push_back(regs[k].dim());
    ostrides.push_back(strides[k]);
  }
  return {enumerate_offsets(tdims, tstrides), enumerate_offsets(odims, ostrides, start)};
}

template <typename Real>
DenseMatrix<Real> gather(const Amplitudes<Real>& amps, const BlockIndex& ix) {
  DenseMatrix<Real> block(static_cast<Index>(ix.inner.size()), static_cast<Index>(ix.outer.size()));
  for (Index b = 0; b < block.cols(); ++b) {
    const Index base = ix.outer[static_cast<std::size_t>(b)];
    for (Index j = 0; j < block.rows(); ++j) block(j, b) = amps[base + ix.inner[static_cast<std::size_t>(j)]];
  }
  return block;
}

template <typename Real>
void scatter(Amplitudes<Real>& amps, const BlockIndex& ix, const DenseMatrix<Real>& block) {
  for (Index b = 0; b < block.cols(); ++b) {
    const Index base = ix.outer[static_cast<std::size_t>(b)];
    for (Index j = 0; j < block.rows(); ++j) amps[base + ix.inner[static_cast<std::size_t>(j)]] = block(j, b);
  }
}

template <typename Real>
Amplitudes<Real> kron(const Amplitudes<Real>& a, const Amplitudes<Real>& b) {
  Amplitudes<Real> out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

template <typename Real>
Index product_of_dims(const BasicState<Real>& state, const std::vector<std::string>& names) {
  Index d = 1;
  for (const auto& n : names) d *= state.reg(n).dim();
  return d;
}

template <typename Real>
void check_operator(const BasicState<Real>& state, const BasicOperator<Real>& op) {
  if (op.targets().empty()) throw DimensionError("operator is not bound to any register");
  for (const auto& n : op.targets())
    if (!state.has(n)) throw DimensionError("operator targets unknown register " + n);
  if (product_of_dims(state, op.targets()) != op.dim())
    throw DimensionError("operator dimension " + std::to_string(op.dim()) +
                         " does not match its target registers");
}

}  // namespace detail

/// Product state. Each register gets either a basis label or a normalized
/// amplitude vector of its dimension.
template <typename Real = double>
BasicState<Real> make_state(std::vector<Register> registers, const Assignment<Real>& assignment) {
  std::set<std::string> names;
  for (const auto& r : registers)
    if (!names.insert(r.name()).second) throw DimensionError("duplicate register name " + r.name());
  for (const auto& [name, value] : assignment)
    if (!names.count(name)) throw DimensionError("assignment names unknown register " + name);

  Amplitudes<Real> amps = Amplitudes<Real>::Ones(1);
  for (const auto& r : registers) {
    auto it = assignment.find(r.name());
    if (it == assignment.end()) throw Error("register " + r.name() + " is not assigned");
    Amplitudes<Real> local;
    if (const auto* label = std::get_if<std::string>(&it->second)) {
      local = Amplitudes<Real>::Zero(r.dim());
      local[r.index_of(*label)] = Real(1);
    } else {
      local = std::get<Amplitudes<Real>>(it->second);
      if (local.size() != r.dim())
        throw DimensionError("amplitudes for " + r.name() + " have wrong length");
      if (std::abs(local.norm() - Real(1)) > Real(kInputNormTolerance))
        throw Error("amplitudes for " + r.name() + " are not normalized");
    }
    amps = detail::kron<Real>(amps, local);
  }
  return BasicState<Real>(std::move(registers), std::move(amps));
}

/// Appends a register in the given local state (product extension).
template <typename Real>
BasicState<Real> append_register(const BasicState<Real>& state, Register reg, const Amplitudes<Real>& local) {
  if (local.size() != reg.dim()) throw DimensionError("amplitudes for " + reg.name() + " have wrong length");
  auto regs = state.registers();
  regs.push_back(std::move(reg));
  return BasicState<Real>(std::move(regs), detail::kron<Real>(state.amplitudes(), local), state.norm_tolerance());
}

/// Contracts op with the state on its target registers, identity elsewhere.
template <typename Real>
BasicState<Real> apply_op(const BasicState<Real>& state, const BasicOperator<Real>& op) {
  detail::check_operator(state, op);
  auto ix = detail::block_index(state, op.targets());
  DenseMatrix<Real> block = op.matrix() * detail::gather(state.amplitudes(), ix);
  Amplitudes<Real> amps = state.amplitudes();
  detail::scatter(amps, ix, block);
  return state.with_amplitudes(std::move(amps));
}

/// Applies op only on the subspace where `control` holds `label`.
template <typename Real>
BasicState<Real> apply_controlled(const BasicState<Real>& state, const BasicOperator<Real>& op,
                                  const std::string& control, std::string_view label) {
  detail::check_operator(state, op);
  auto ix = detail::block_index(state, op.targets(), std::make_pair(control, state.reg(control).index_of(label)));
  DenseMatrix<Real> block = op.matrix() * detail::gather(state.amplitudes(), ix);
  Amplitudes<Real> amps = state.amplitudes();
  detail::scatter(amps, ix, block);
  return state.with_amplitudes(std::move(amps));
}

/// Absolute probability of each label of `name` (sums to the squared norm).
template <typename Real>
std::vector<Real> outcome_probabilities(const BasicState<Real>& state, const std::string& name) {
  auto block = detail::gather(state.amplitudes(), detail::block_index(state, {name}));
  std::vector<Real> p(static_cast<std::size_t>(block.rows()));
  for (Eigen::Index j = 0; j < block.rows(); ++j) p[static_cast<std::size_t>(j)] = block.row(j).squaredNorm();
  return p;
}

/// Projects `name` onto `label`. The probability is the squared norm of the
/// projected branch; the returned state is renormalized.
template <typename Real>
BasicProjection<Real> project(const BasicState<Real>& state, const std::string& name, std::string_view label) {
  const auto& reg = state.reg(name);
  const auto keep = reg.index_of(label);
  auto ix = detail::block_index(state, {name});
  Amplitudes<Real> amps = Amplitudes<Real>::Zero(state.size());
  Real probability = 0;
  for (auto base : ix.outer) {
    const auto i = base + ix.inner[static_cast<std::size_t>(keep)];
    amps[i] = state.amplitudes()[i];
    probability += std::norm(amps[i]);
  }
  if (!(probability >= Real(kImpossibleOutcomeThreshold)))
    throw ImpossibleOutcome("outcome " + std::string(label) + " on " + name +
                            " has probability " + std::to_string(static_cast<double>(probability)));
  amps /= std::sqrt(probability);
  return {state.with_amplitudes(std::move(amps)), probability};
}

/// Drops register `name`, keeping the amplitudes where it holds `label`.
/// No renormalization; after project() on the same label this is exact.
template <typename Real>
BasicState<Real> slice(const BasicState<Real>& state, const std::string& name, std::string_view label) {
  const auto k = state.position_of(name);
  const auto keep = state.registers()[k].index_of(label);
  auto ix = detail::block_index(state, {name});
  Amplitudes<Real> amps(static_cast<Eigen::Index>(ix.outer.size()));
  for (std::size_t b = 0; b < ix.outer.size(); ++b)
    amps[static_cast<Eigen::Index>(b)] = state.amplitudes()[ix.outer[b] + ix.inner[static_cast<std::size_t>(keep)]];
  auto regs = state.registers();
  regs.erase(regs.begin() + static_cast<std::ptrdiff_t>(k));
  return BasicState<Real>(std::move(regs), std::move(amps), state.norm_tolerance());
}

/// Replaces register `name` by `replacement`, mixing amplitudes through
/// `map` (rows: new labels, columns: old labels). The map may be non-square
/// and sub-unitary.
template <typename Real>
BasicState<Real> rebase_register(const BasicState<Real>& state, const std::string& name,
                                 Register replacement, const DenseMatrix<Real>& map) {
  const auto k = state.position_of(name);
  if (map.cols() != state.registers()[k].dim() || map.rows() != replacement.dim())
    throw DimensionError("rebase map for " + name + " has the wrong shape");
  auto src = detail::block_index(state, {name});
  DenseMatrix<Real> block = map * detail::gather(state.amplitudes(), src);

  auto regs = state.registers();
  const std::string new_name = replacement.name();
  regs[k] = std::move(replacement);
  BasicState<Real> out(regs, Amplitudes<Real>::Zero(static_cast<Eigen::Index>(src.outer.size()) * map.rows()),
                       state.norm_tolerance());
  auto dst = detail::block_index(out, {new_name});
  Amplitudes<Real> amps = out.amplitudes();
  detail::scatter(amps, dst, block);
  return out.with_amplitudes(std::move(amps));
}

/// Permutes the register order (and the amplitude layout with it).
template <typename Real>
BasicState<Real> reorder(const BasicState<Real>& state, const std::vector<std::string>& order) {
  if (order.size() != state.registers().size())
    throw DimensionError("reorder needs every register exactly once");
  const auto strides = state.strides();
  std::vector<Register> regs;
  std::vector<Eigen::Index> dims, old_strides;
  std::set<std::size_t> seen;
  for (const auto& n : order) {
    const auto k = state.position_of(n);
    if (!seen.insert(k).second) throw DimensionError("register " + n + " listed twice");
    regs.push_back(state.registers()[k]);
    dims.push_back(regs.back().dim());
    old_strides.push_back(strides[k]);
  }
  const auto src = detail::enumerate_offsets(dims, old_strides);
  Amplitudes<Real> amps(state.size());
  for (std::size_t i = 0; i < src.size(); ++i) amps[static_cast<Eigen::Index>(i)] = state.amplitudes()[src[i]];
  return BasicState<Real>(std::move(regs), std::move(amps), state.norm_tolerance());
}

template <typename Real>
std::vector<std::string> register_names(const BasicState<Real>& state) {
  std::vector<std::string> names;
  for (const auto& r : state.registers()) names.push_back(r.name());
  return names;
}

/// |<a|b>|^2 of the normalized rays; insensitive to global phase.
template <typename Real>
Real fidelity(const BasicState<Real>& a, const BasicState<Real>& b) {
  if (a.registers() != b.registers()) throw DimensionError("fidelity: register lists differ");
  const Real na = a.squared_norm(), nb = b.squared_norm();
  if (na == Real(0) || nb == Real(0)) throw Error("fidelity: zero state");
  const Real f = std::norm(a.amplitudes().dot(b.amplitudes())) / (na * nb);
  return std::clamp(f, Real(0), Real(1));
}

/// <target| rho_subset |target>, with rho_subset the partial trace of the
/// (normalized) state over every register outside `subset`.
template <typename Real>
Real reduced_fidelity(const BasicState<Real>& state, const std::vector<std::string>& subset,
                      const Amplitudes<Real>& target) {
  if (subset.empty()) throw DimensionError("reduced_fidelity: empty subset");
  if (detail::product_of_dims(state, subset) != target.size())
    throw DimensionError("reduced_fidelity: target dimension mismatch");
  if (std::abs(target.norm() - Real(1)) > Real(kInputNormTolerance))
    throw Error("reduced_fidelity: target is not normalized");
  const Real n = state.squared_norm();
  if (n == Real(0)) throw Error("reduced_fidelity: zero state");
  auto block = detail::gather(state.amplitudes(), detail::block_index(state, subset));
  const Real f = (target.adjoint() * block).squaredNorm() / n;
  return std::clamp(f, Real(0), Real(1));
}

}  // namespace slitport

#endif  // SLITPORT_FOCKSPACE_HPP
