// Copyright 2026 The rsvp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Pauli measurement ensemble for quantum state tomography.
//
// A code is a string of q symbols over {I, X, Y, Z}; symbol t acts on bit t
// (little-endian) of the basis index, so the observable is
//   E = sigma_{q-1} (x) ... (x) sigma_1 (x) sigma_0.
// Every E is Hermitian, unitary and trace-orthogonal: tr(E_j E_k) = n delta_jk.
//
// The operator maps X to y_j = sqrt(n / p) <E_j, X>, which makes
// A A^H = (n^2 / p) I exactly for distinct codes. Nothing on this path ever
// holds an n x n array: E_j acts on a vector as a signed permutation,
//   (E x)[i] = i^{#Y} (-1)^{popcount((i ^ xmask) & zymask)} x[i ^ xmask],
// where xmask marks X/Y positions and zymask marks Z/Y positions.
//
// In real mode the operator acts on real matrices through Re(E_j): codes with
// an odd number of Y symbols are purely imaginary and drop out, and the
// adjoint returns the real part of sum_j z_j E_j.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "rsvp/core/factor.hpp"
#include "rsvp/core/parallel.hpp"
#include "rsvp/core/random.hpp"

namespace rsvp {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

inline Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': case 'i': return Pauli::I;
    case 'X': case 'x': return Pauli::X;
    case 'Y': case 'y': return Pauli::Y;
    case 'Z': case 'z': return Pauli::Z;
    default: throw dimension_error(std::string("PauliCode: invalid symbol '") + c + "'");
  }
}

inline constexpr int kMaxQubits = 24;

class PauliCode {
 public:
  explicit PauliCode(std::vector<Pauli> symbols) : symbols_(std::move(symbols)) {
    require(!symbols_.empty(), "PauliCode: need at least one qubit");
    require(qubits() <= kMaxQubits, "PauliCode: too many qubits");
    for (int t = 0; t < qubits(); ++t) {
      const Pauli s = symbols_[static_cast<std::size_t>(t)];
      const std::uint64_t bit = std::uint64_t{1} << t;
      if (s == Pauli::X || s == Pauli::Y) x_mask_ |= bit;
      if (s == Pauli::Z || s == Pauli::Y) zy_mask_ |= bit;
      if (s == Pauli::Y) ++y_count_;
    }
  }

  /// Character t of the string is the symbol on qubit t.
  static PauliCode from_string(std::string_view s) {
    std::vector<Pauli> sym;
    sym.reserve(s.size());
    for (char c : s) sym.push_back(pauli_from_char(c));
    return PauliCode(std::move(sym));
  }

  /// Base-4 digits of `index`, least significant digit on qubit 0.
  static PauliCode from_index(std::uint64_t index, int qubits) {
    require(qubits >= 1 && qubits <= kMaxQubits, "PauliCode: qubit count out of range");
    std::vector<Pauli> sym(static_cast<std::size_t>(qubits));
    for (int t = 0; t < qubits; ++t) {
      sym[static_cast<std::size_t>(t)] = static_cast<Pauli>(index & 3u);
      index >>= 2;
    }
    require(index == 0, "PauliCode: index out of range");
    return PauliCode(std::move(sym));
  }

  std::uint64_t index() const {
    std::uint64_t idx = 0;
    for (int t = qubits() - 1; t >= 0; --t)
      idx = (idx << 2) | static_cast<std::uint64_t>(symbols_[static_cast<std::size_t>(t)]);
    return idx;
  }

  std::string to_string() const {
    std::string s;
    for (Pauli p : symbols_) s.push_back(pauli_char(p));
    return s;
  }

  int qubits() const { return static_cast<int>(symbols_.size()); }
  Index dimension() const { return Index{1} << qubits(); }
  const std::vector<Pauli>& symbols() const { return symbols_; }
  std::uint64_t x_mask() const { return x_mask_; }
  std::uint64_t zy_mask() const { return zy_mask_; }
  int y_count() const { return y_count_; }
  bool is_identity() const { return x_mask_ == 0 && zy_mask_ == 0; }

  /// i^{#Y}: the global phase of the signed permutation.
  Complex phase() const {
    switch (y_count_ & 3) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }

  friend bool operator==(const PauliCode& a, const PauliCode& b) { return a.symbols_ == b.symbols_; }

 private:
  std::vector<Pauli> symbols_;
  std::uint64_t x_mask_ = 0;
  std::uint64_t zy_mask_ = 0;
  int y_count_ = 0;
};

/// E x for one code, applying each single-qubit factor in turn with stride
/// 2^t: O(q n) work. The output is complex because sigma_y is.
template <Field S>
ComplexVector pauli_apply_vector(const PauliCode& code, const Vector<S>& x) {
  const Index n = code.dimension();
  require(x.size() == n, "pauli_apply_vector: vector length " + std::to_string(x.size()) +
                             " does not match 2^q = " + std::to_string(n));
  ComplexVector y = x.template cast<Complex>();
  const Complex I(0.0, 1.0);
  for (int t = 0; t < code.qubits(); ++t) {
    const Pauli s = code.symbols()[static_cast<std::size_t>(t)];
    if (s == Pauli::I) continue;
    const Index stride = Index{1} << t;
    for (Index base = 0; base < n; base += 2 * stride) {
      for (Index i0 = base; i0 < base + stride; ++i0) {
        const Index i1 = i0 + stride;
        const Complex a = y(i0);
        const Complex b = y(i1);
        switch (s) {
          case Pauli::X: y(i0) = b; y(i1) = a; break;
          case Pauli::Y: y(i0) = -I * b; y(i1) = I * a; break;
          case Pauli::Z: y(i1) = -b; break;
          case Pauli::I: break;
        }
      }
    }
  }
  return y;
}

class PauliOperator {
 public:
  PauliOperator(int qubits, std::vector<PauliCode> codes, bool real_mode = true)
      : qubits_(qubits), codes_(std::move(codes)), real_mode_(real_mode) {
    require(qubits >= 1 && qubits <= kMaxQubits, "PauliOperator: qubit count out of range");
    require(!codes_.empty(), "PauliOperator: need at least one code");
    const double total = std::pow(4.0, qubits);
    require(static_cast<double>(codes_.size()) <= total, "PauliOperator: more codes than 4^q");
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(codes_.size());
    entries_.reserve(codes_.size());
    for (std::size_t j = 0; j < codes_.size(); ++j) {
      const PauliCode& c = codes_[j];
      require(c.qubits() == qubits, "PauliOperator: code " + c.to_string() + " has wrong length");
      require(seen.insert(c.index()).second, "PauliOperator: duplicate code " + c.to_string());
      entries_.push_back({c.x_mask(), c.zy_mask(), c.phase(), static_cast<Index>(j)});
      if (!real_mode_ || (c.y_count() % 2 == 0)) active_.push_back(j);
    }
    scale_ = std::sqrt(static_cast<double>(dimension()) / static_cast<double>(codes_.size()));
  }

  int qubits() const { return qubits_; }
  Index dimension() const { return Index{1} << qubits_; }
  Index rows() const { return dimension(); }
  Index cols() const { return dimension(); }
  Index measurements() const { return static_cast<Index>(codes_.size()); }
  double scale() const { return scale_; }
  bool real_mode() const { return real_mode_; }
  bool is_symmetric() const { return true; }
  const std::vector<PauliCode>& codes() const { return codes_; }

  /// ||A||^2 = n^2 / p, exact by trace orthogonality.
  double norm_sq() const {
    const double n = static_cast<double>(dimension());
    return n * n / static_cast<double>(measurements());
  }

  unsigned threads() const { return threads_; }
  /// Worker count for apply / adjoint_apply. Results do not depend on it.
  void set_threads(unsigned k) { threads_ = std::max(1u, k); }

  /// y_j = scale * <E_j, U diag(d) V^H>, computed as
  /// sum_k d_k v_k^H E_j u_k in O(p k n). Complex inputs must produce real
  /// measurements; an imaginary residue above 1e-10 (relative) is an error.
  template <Field S>
  RealVector apply(const Matrix<S>& U, const RealVector& d, const Matrix<S>& V) const {
    const Index n = dimension();
    require(U.rows() == n && V.rows() == n, "PauliOperator::apply: factor rows must equal 2^q");
    require(U.cols() == d.size() && V.cols() == d.size(), "PauliOperator::apply: width mismatch");
    require_real_compatible<S>();

    const Index k = d.size();
    RealVector y = RealVector::Zero(measurements());
    double bound = 0.0;
    for (Index c = 0; c < k; ++c) bound += std::abs(d(c)) * U.col(c).norm() * V.col(c).norm();
    bound *= scale_;

    constexpr std::size_t kChunk = 64;
    const std::size_t chunks = (active_.size() + kChunk - 1) / kChunk;
    std::vector<double> residue(chunks, 0.0);
    parallel_for(chunks, threads_, [&](std::size_t chunk) {
      const std::size_t begin = chunk * kChunk;
      const std::size_t end = std::min(active_.size(), begin + kChunk);
      for (std::size_t a = begin; a < end; ++a) {
        const Entry& e = entries_[active_[a]];
        S acc = S(0);
        for (Index c = 0; c < k; ++c) {
          if (d(c) == 0.0) continue;
          acc += S(d(c)) * signed_permuted_dot<S>(e, V.col(c).data(), U.col(c).data(), n);
        }
        Complex t = e.phase * Complex(acc);
        if (real_mode_) t = Complex(t.real(), 0.0);
        y(e.index) = scale_ * t.real();
        residue[chunk] = std::max(residue[chunk], scale_ * std::abs(t.imag()));
      }
    });
    const double worst = *std::max_element(residue.begin(), residue.end());
    if (worst > 1e-10 * std::max(1.0, bound))
      throw contract_error("PauliOperator::apply: measurement has an imaginary part; "
                           "input is not Hermitian");
    return y;
  }

  template <Field S>
  RealVector apply(const FactorTriple<S>& f) const {
    return apply<S>(f.U(), f.d(), f.V());
  }

  /// (sum_j scale z_j E_j) W without forming the sum: O(p s n). In real mode
  /// the real part of the sum is applied.
  template <Field S>
  Matrix<S> adjoint_apply(const RealVector& z, const Matrix<S>& W) const {
    const Index n = dimension();
    require(z.size() == measurements(), "PauliOperator::adjoint_apply: z has wrong length");
    require(W.rows() == n, "PauliOperator::adjoint_apply: block rows must equal 2^q");
    require_real_compatible<S>();

    const Index s = W.cols();
    Matrix<S> out = Matrix<S>::Zero(n, s);
    if (s == 0) return out;

    // Coefficients per active code, with the phase folded in.
    std::vector<S> coef(active_.size());
    for (std::size_t a = 0; a < active_.size(); ++a) {
      const Entry& e = entries_[active_[a]];
      const Complex c = scale_ * z(e.index) * e.phase;
      if constexpr (is_complex_v<S>) {
        coef[a] = c;
      } else {
        coef[a] = c.real();
      }
    }

    // Each task owns a block of output rows in one column, and every entry is
    // accumulated over codes in the same order, so the result is identical
    // for any thread count.
    const Index block = std::min<Index>(n, 512);
    const Index row_blocks = n / block;
    parallel_for(static_cast<std::size_t>(row_blocks * s), threads_, [&](std::size_t task) {
      const Index col = static_cast<Index>(task) / row_blocks;
      const Index i0 = (static_cast<Index>(task) % row_blocks) * block;
      const S* w = W.col(col).data();
      S* o = out.col(col).data();
      for (std::size_t a = 0; a < active_.size(); ++a) {
        if (coef[a] == S(0)) continue;
        const Entry& e = entries_[active_[a]];
        const S sv[2] = {coef[a], -coef[a]};
        const std::uint64_t xm = e.x_mask;
        const std::uint64_t zy = e.zy_mask;
        for (Index i = i0; i < i0 + block; ++i) {
          const std::uint64_t src = static_cast<std::uint64_t>(i) ^ xm;
          o[i] += sv[std::popcount(src & zy) & 1] * w[src];
        }
      }
    });
    return out;
  }

  /// (A*(z))^H W. Each E_j is Hermitian and z is real, so this is adjoint_apply.
  template <Field S>
  Matrix<S> adjoint_apply_adj(const RealVector& z, const Matrix<S>& W) const {
    return adjoint_apply<S>(z, W);
  }

  /// Dense p x n^2 measurement matrix with row j = scale * vec(E_j)^H
  /// (column-major vec). Limited to n^2 <= max_entries.
  ComplexMatrix densify(Index max_entries = Index{1} << 20) const {
    const Index n = dimension();
    if (n * n > max_entries)
      throw size_limit_error("PauliOperator::densify: n^2 exceeds the dense size limit");
    ComplexMatrix A = ComplexMatrix::Zero(measurements(), n * n);
    for (const Entry& e : entries_) {
      for (Index b = 0; b < n; ++b) {
        const std::uint64_t ub = static_cast<std::uint64_t>(b);
        const Index a = static_cast<Index>(ub ^ e.x_mask);
        const double sign = (std::popcount(ub & e.zy_mask) & 1) ? -1.0 : 1.0;
        A(e.index, a + b * n) = scale_ * std::conj(e.phase * sign);
      }
    }
    return A;
  }

 private:
  struct Entry {
    std::uint64_t x_mask;
    std::uint64_t zy_mask;
    Complex phase;
    Index index;
  };

  template <Field S>
  void require_real_compatible() const {
    if constexpr (!is_complex_v<S>) {
      if (!real_mode_)
        throw contract_error("PauliOperator: real scalars require real_mode");
    }
  }

  // sum_i conj(v[i]) * (-1)^{popcount((i ^ x) & zy)} * u[i ^ x]; the phase is
  // applied by the caller.
  template <Field S>
  static S signed_permuted_dot(const Entry& e, const S* v, const S* u, Index n) {
    S acc = S(0);
    for (Index i = 0; i < n; ++i) {
      const std::uint64_t src = static_cast<std::uint64_t>(i) ^ e.x_mask;
      S term;
      if constexpr (is_complex_v<S>) {
        term = std::conj(v[i]) * u[src];
      } else {
        term = v[i] * u[src];
      }
      acc += (std::popcount(src & e.zy_mask) & 1) ? -term : term;
    }
    return acc;
  }

  int qubits_;
  std::vector<PauliCode> codes_;
  bool real_mode_;
  double scale_ = 1.0;
  unsigned threads_ = 1;
  std::vector<Entry> entries_;
  std::vector<std::size_t> active_;  // indices into entries_ that contribute
};

/// p distinct codes drawn uniformly without replacement from all 4^q.
inline PauliOperator sample_pauli_operator(int qubits, Index p, Rng& rng, bool real_mode = true) {
  require(qubits >= 1 && qubits <= kMaxQubits, "sample_pauli_operator: qubit count out of range");
  const std::uint64_t total = std::uint64_t{1} << (2 * qubits);
  require(p >= 1 && static_cast<std::uint64_t>(p) <= total,
          "sample_pauli_operator: p = " + std::to_string(p) + " exceeds 4^q");
  std::vector<std::uint64_t> picked;
  picked.reserve(static_cast<std::size_t>(p));
  if (static_cast<std::uint64_t>(p) * 2 >= total) {
    std::vector<std::uint64_t> all(total);
    for (std::uint64_t i = 0; i < total; ++i) all[i] = i;
    std::shuffle(all.begin(), all.end(), rng);
    picked.assign(all.begin(), all.begin() + p);
  } else {
    std::uniform_int_distribution<std::uint64_t> pick(0, total - 1);
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(static_cast<std::size_t>(p) * 2);
    while (static_cast<Index>(picked.size()) < p) {
      const std::uint64_t idx = pick(rng);
      if (seen.insert(idx).second) picked.push_back(idx);
    }
  }
  std::vector<PauliCode> codes;
  codes.reserve(picked.size());
  for (std::uint64_t idx : picked) codes.push_back(PauliCode::from_index(idx, qubits));
  return PauliOperator(qubits, std::move(codes), real_mode);
}

/// Every code of a q-qubit system, in index order.
inline PauliOperator full_pauli_operator(int qubits, bool real_mode = true) {
  require(qubits >= 1 && qubits <= 8, "full_pauli_operator: qubit count out of range");
  const std::uint64_t total = std::uint64_t{1} << (2 * qubits);
  std::vector<PauliCode> codes;
  codes.reserve(total);
  for (std::uint64_t i = 0; i < total; ++i) codes.push_back(PauliCode::from_index(i, qubits));
  return PauliOperator(qubits, std::move(codes), real_mode);
}

/// A(I): only the all-identity code sees a nonzero trace.
inline RealVector measure_identity(const PauliOperator& op) {
  RealVector y = RealVector::Zero(op.measurements());
  for (Index j = 0; j < op.measurements(); ++j)
    if (op.codes()[static_cast<std::size_t>(j)].is_identity())
      y(j) = op.scale() * static_cast<double>(op.dimension());
  return y;
}

}  // namespace rsvp
