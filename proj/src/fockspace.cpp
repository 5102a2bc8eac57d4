#include "bateman/fockspace.hpp"

#include <cmath>
#include <string>

namespace bateman {

namespace {

void require_same_basis(const FockBasis& a, const FockBasis& b,
                        const char* where) {
  if (!(a == b)) {
    throw DimensionError(std::string(where) + ": basis mismatch (n_max " +
                         std::to_string(a.n_max()) + " vs " +
                         std::to_string(b.n_max()) + ")");
  }
}

}  // namespace

FockBasis::FockBasis(int n_max) : n_max_(n_max) {
  if (n_max < 0) {
    throw DomainError("FockBasis: n_max must be non-negative, got " +
                      std::to_string(n_max));
  }
}

Eigen::Index FockBasis::index_of(FockIndex idx) const {
  if (!contains(idx)) {
    throw DomainError("FockBasis::index_of: (" + std::to_string(idx.n1) +
                      ", " + std::to_string(idx.n2) + ") outside cap " +
                      std::to_string(n_max_));
  }
  return static_cast<Eigen::Index>(idx.n1) * (n_max_ + 1) + idx.n2;
}

FockIndex FockBasis::fock_of(Eigen::Index k) const {
  if (k < 0 || k >= dimension()) {
    throw DomainError("FockBasis::fock_of: linear index " + std::to_string(k) +
                      " outside dimension " + std::to_string(dimension()));
  }
  const int stride = n_max_ + 1;
  return {static_cast<int>(k / stride), static_cast<int>(k % stride)};
}

FockBasis make_basis(int n_max) { return FockBasis(n_max); }

std::vector<Eigen::Index> InteriorBlock::indices(const FockBasis& basis) const {
  std::vector<Eigen::Index> out;
  const int cap = basis.n_max() - margin;
  if (cap < 0) return out;
  out.reserve(static_cast<std::size_t>(cap + 1) * (cap + 1));
  for (int n1 = 0; n1 <= cap; ++n1)
    for (int n2 = 0; n2 <= cap; ++n2)
      out.push_back(basis.index_of({n1, n2}));
  return out;
}

StateVector unit_state(const FockBasis& basis, FockIndex idx, StateRole role) {
  Vector v = Vector::Zero(basis.dimension());
  v(basis.index_of(idx)) = Complex(1.0, 0.0);
  return {basis, std::move(v), role};
}

OperatorMatrix ladder_matrix(const FockBasis& basis, Mode mode,
                             LadderKind kind) {
  const int cap = basis.n_max();
  Matrix m = Matrix::Zero(basis.dimension(), basis.dimension());
  for (int n1 = 0; n1 <= cap; ++n1) {
    for (int n2 = 0; n2 <= cap; ++n2) {
      const FockIndex from{n1, n2};
      const int n = (mode == Mode::one) ? n1 : n2;
      if (kind == LadderKind::lower) {
        if (n == 0) continue;
        const FockIndex to = (mode == Mode::one) ? FockIndex{n1 - 1, n2}
                                                 : FockIndex{n1, n2 - 1};
        m(basis.index_of(to), basis.index_of(from)) = std::sqrt(double(n));
      } else {
        if (n == cap) continue;  // truncation annihilates the top level
        const FockIndex to = (mode == Mode::one) ? FockIndex{n1 + 1, n2}
                                                 : FockIndex{n1, n2 + 1};
        m(basis.index_of(to), basis.index_of(from)) = std::sqrt(double(n + 1));
      }
    }
  }
  return {basis, std::move(m)};
}

OperatorMatrix identity_matrix(const FockBasis& basis) {
  return {basis, Matrix::Identity(basis.dimension(), basis.dimension())};
}

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_basis(a.basis, b.basis, "commutator");
  return {a.basis, a.entries * b.entries - b.entries * a.entries};
}

OperatorMatrix matrix_exp(const OperatorMatrix& a, double tol) {
  if (!(tol > 0.0)) throw DomainError("matrix_exp: tol must be positive");
  if (!a.entries.allFinite())
    throw DomainError("matrix_exp: input has non-finite entries");

  // infinity norm; scale until the scaled norm is at most 1/2
  const double norm = a.entries.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  double scaled_norm = norm;
  while (scaled_norm > 0.5) {
    scaled_norm *= 0.5;
    ++squarings;
  }

  // Series order from the a-priori remainder bound
  //   sum_{k>K} s^k/k! <= s^{K+1}/(K+1)! * 1/(1 - s/(K+2)),
  // with tol shared across the squaring stages.
  const double target = tol / std::ldexp(1.0, squarings);
  constexpr int kMaxOrder = 40;
  int order = -1;
  double head = 1.0;  // s^{K+1}/(K+1)! as K advances
  for (int k = 0; k <= kMaxOrder; ++k) {
    head *= scaled_norm / (k + 1);
    const double bound = head / (1.0 - scaled_norm / (k + 2));
    if (bound <= target) {
      order = k;
      break;
    }
  }
  if (order < 0) {
    throw ConvergenceError(
        "matrix_exp: remainder bound " + std::to_string(target) +
        " not achievable within series order " + std::to_string(kMaxOrder));
  }

  const Matrix scaled = a.entries / std::ldexp(1.0, squarings);
  const Matrix eye = Matrix::Identity(a.entries.rows(), a.entries.cols());
  Matrix p = eye;
  for (int k = order; k >= 1; --k) p = eye + (scaled * p) / double(k);
  for (int i = 0; i < squarings; ++i) p = p * p;
  return {a.basis, std::move(p)};
}

Complex naive_inner(const StateVector& u, const StateVector& v) {
  require_same_basis(u.basis, v.basis, "naive_inner");
  return u.amplitudes.dot(v.amplitudes);
}

StateVector apply(const OperatorMatrix& op, const StateVector& v) {
  require_same_basis(op.basis, v.basis, "apply");
  return {v.basis, op.entries * v.amplitudes, v.role};
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_basis(a.basis, b.basis, "operator+");
  return {a.basis, a.entries + b.entries};
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_basis(a.basis, b.basis, "operator-");
  return {a.basis, a.entries - b.entries};
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_basis(a.basis, b.basis, "operator*");
  return {a.basis, a.entries * b.entries};
}

OperatorMatrix operator*(Complex scale, const OperatorMatrix& a) {
  return {a.basis, scale * a.entries};
}

OperatorMatrix adjoint(const OperatorMatrix& a) {
  return {a.basis, a.entries.adjoint()};
}

Matrix interior_block(const OperatorMatrix& a, const InteriorBlock& block) {
  const auto idx = block.indices(a.basis);
  return a.entries(idx, idx);
}

Vector interior_part(const StateVector& v, const InteriorBlock& block) {
  const auto idx = block.indices(v.basis);
  return v.amplitudes(idx);
}

double interior_max_norm(const OperatorMatrix& a, const InteriorBlock& block) {
  return max_abs(interior_block(a, block));
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace bateman
