#pragma once

#include <vector>

#include "bateman/types.hpp"

namespace bateman {

/// Occupation labels (n1, n2) of a two-mode Fock state.
struct FockIndex {
  int n1 = 0;
  int n2 = 0;

  friend bool operator==(const FockIndex&, const FockIndex&) = default;
};

/// Truncated two-mode Fock space with a per-mode cap n_max.
///
/// States |n1,n2> with 0 <= n1,n2 <= n_max are enumerated row-major:
/// linear index = n1*(n_max+1) + n2, so dimension = (n_max+1)^2.
class FockBasis {
 public:
  explicit FockBasis(int n_max);

  int n_max() const { return n_max_; }
  Eigen::Index dimension() const {
    return static_cast<Eigen::Index>(n_max_ + 1) * (n_max_ + 1);
  }

  bool contains(FockIndex idx) const {
    return idx.n1 >= 0 && idx.n2 >= 0 && idx.n1 <= n_max_ && idx.n2 <= n_max_;
  }

  Eigen::Index index_of(FockIndex idx) const;
  FockIndex fock_of(Eigen::Index k) const;

  friend bool operator==(const FockBasis&, const FockBasis&) = default;

 private:
  int n_max_;
};

FockBasis make_basis(int n_max);

enum class Mode { one = 1, two = 2 };
enum class LadderKind { lower, raise };
enum class StateRole { ket, dual_bra };

/// Complex amplitude vector over a FockBasis. The role distinguishes kets
/// from dual (bra) vectors; a dual bra stores the column v with <bra| = v^H.
struct StateVector {
  FockBasis basis;
  Vector amplitudes;
  StateRole role = StateRole::ket;
};

/// Dense complex matrix over a FockBasis.
struct OperatorMatrix {
  FockBasis basis;
  Matrix entries;
};

/// Sub-basis away from the truncation cap: states with
/// n1 <= n_max - margin and n2 <= n_max - margin. Operator identities of the
/// untruncated theory hold numerically on this block only.
struct InteriorBlock {
  int margin = 0;

  bool contains(const FockBasis& basis, FockIndex idx) const {
    return idx.n1 <= basis.n_max() - margin && idx.n2 <= basis.n_max() - margin;
  }
  std::vector<Eigen::Index> indices(const FockBasis& basis) const;
};

StateVector unit_state(const FockBasis& basis, FockIndex idx,
                       StateRole role = StateRole::ket);

/// Ladder matrix on one mode: lower has <n-1|a|n> = sqrt(n), identity action
/// on the other mode; raise is built from <n+1|a^dag|n> = sqrt(n+1), which
/// equals the conjugate transpose of lower. Raising past n_max maps to zero.
OperatorMatrix ladder_matrix(const FockBasis& basis, Mode mode,
                             LadderKind kind);

OperatorMatrix identity_matrix(const FockBasis& basis);

/// ab - ba. Throws DimensionError on basis mismatch.
OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);

/// Matrix exponential by scaling-and-squaring of a truncated Taylor series.
/// The series order is chosen a priori so that the max-norm remainder bound
/// of the scaled series stays below tol; deterministic for fixed inputs.
/// Throws ConvergenceError when no admissible order reaches the bound.
OperatorMatrix matrix_exp(const OperatorMatrix& a, double tol);

/// Naive pairing sum_k conj(u_k) v_k (conjugate-linear in the first slot).
Complex naive_inner(const StateVector& u, const StateVector& v);

StateVector apply(const OperatorMatrix& op, const StateVector& v);

// Basis-checked operator algebra.
OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator*(Complex scale, const OperatorMatrix& a);
OperatorMatrix adjoint(const OperatorMatrix& a);

// Interior-block restrictions (rows and columns, or amplitudes).
Matrix interior_block(const OperatorMatrix& a, const InteriorBlock& block);
Vector interior_part(const StateVector& v, const InteriorBlock& block);
double interior_max_norm(const OperatorMatrix& a, const InteriorBlock& block);
double max_abs(const Matrix& m);

}  // namespace bateman
