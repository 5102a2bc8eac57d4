#include "bateman/states.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace bateman {

namespace {

constexpr double kQuarterPi = M_PI / 4.0;
constexpr double kHalfPi = M_PI / 2.0;

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

void require_convergent_region(ThetaOrBranch theta, const char* method) {
  if (theta.is_branch() || !(std::abs(theta.theta()) < kQuarterPi)) {
    throw DomainError(std::string("bogoliubov_vacuum: method '") + method +
                      "' requires real |theta| < pi/4, got theta = " +
                      std::to_string(theta.theta()));
  }
}

StateVector kernel_vacuum(const FockBasis& basis, ThetaOrBranch theta,
                          double tol) {
  if (!(std::abs(theta.theta()) < kHalfPi)) {
    throw DomainError(
        "bogoliubov_vacuum: kernel method requires |theta| < pi/2, got " +
        std::to_string(theta.theta()));
  }
  const auto ops = build_barred_linear(basis, theta);
  const Eigen::Index dim = basis.dimension();
  Matrix stacked(2 * dim, dim);
  stacked.topRows(dim) = ops.a1.entries;
  stacked.bottomRows(dim) = ops.a2.entries;

  Eigen::BDCSVD<Matrix> svd(stacked, Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const double threshold = sigma(0) * std::max(tol, 1e3 * 2.2e-16);
  int nullity = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) <= threshold) ++nullity;
  if (nullity != 1) {
    throw DegeneracyError(
        "bogoliubov_vacuum: joint nullspace of the barred lowering operators "
        "has dimension " +
        std::to_string(nullity) + " at tolerance " + std::to_string(tol));
  }

  Vector v = svd.matrixV().col(dim - 1);
  const Complex origin = v(basis.index_of({0, 0}));
  if (std::abs(origin) < 1e-8 * v.norm()) {
    throw DegeneracyError(
        "bogoliubov_vacuum: nullvector has no (0,0) component to normalize");
  }
  v *= theta.sec() / origin;
  return {basis, std::move(v), StateRole::ket};
}

}  // namespace

double closed_form_pair_amplitude(ThetaOrBranch theta, int n) {
  if (n < 0) throw DomainError("closed_form_pair_amplitude: n must be >= 0");
  if (theta.is_branch()) {
    const double sign = (theta.branch() == SignBranch::plus || n % 2 == 0)
                            ? 1.0
                            : -1.0;
    return std::sqrt(2.0) * sign;
  }
  return theta.sec() * std::pow(theta.tan(), n);
}

StateVector vacuum_naive(const FockBasis& basis) {
  return unit_state(basis, {0, 0});
}

StateVector bogoliubov_vacuum(const FockBasis& basis, ThetaOrBranch theta,
                              VacuumMethod method, double tol) {
  if (!(tol > 0.0)) throw DomainError("bogoliubov_vacuum: tol must be positive");
  switch (method) {
    case VacuumMethod::taylor: {
      require_convergent_region(theta, "taylor");
      const auto x = build_x(basis);
      return apply(matrix_exp(Complex(theta.theta(), 0.0) * x, tol),
                   vacuum_naive(basis));
    }
    case VacuumMethod::closed_form: {
      require_convergent_region(theta, "closed_form");
      Vector v = Vector::Zero(basis.dimension());
      for (int n = 0; n <= basis.n_max(); ++n)
        v(basis.index_of({n, n})) = closed_form_pair_amplitude(theta, n);
      return {basis, std::move(v), StateRole::ket};
    }
    case VacuumMethod::kernel:
      return kernel_vacuum(basis, theta, tol);
  }
  throw DomainError("bogoliubov_vacuum: unknown method");
}

StateVector bogoliubov_dual_vacuum(const FockBasis& basis, ThetaOrBranch theta,
                                   VacuumMethod method, double tol) {
  StateVector v = bogoliubov_vacuum(basis, theta.negated(), method, tol);
  v.role = StateRole::dual_bra;
  return v;
}

BarredState barred_fock_state(const FockBasis& basis, FockIndex label,
                              ThetaOrBranch theta, VacuumMethod method,
                              double tol) {
  if (label.n1 < 0 || label.n2 < 0)
    throw DomainError("barred_fock_state: occupation labels must be >= 0");
  const int reserve = label.n1 + label.n2 + 2;
  if (std::max(label.n1, label.n2) > basis.n_max() - reserve) {
    throw CapacityError(
        "barred_fock_state: label (" + std::to_string(label.n1) + ", " +
        std::to_string(label.n2) + ") needs n_max >= " +
        std::to_string(std::max(label.n1, label.n2) + reserve) +
        ", have " + std::to_string(basis.n_max()));
  }

  const double scale = 1.0 / std::sqrt(factorial(label.n1) * factorial(label.n2));
  const auto build = [&](ThetaOrBranch t, VacuumMethod m,
                         StateRole role) -> StateVector {
    StateVector s = bogoliubov_vacuum(basis, t, m, tol);
    const auto ops = build_barred_linear(basis, t);
    for (int k = 0; k < label.n2; ++k) s = apply(ops.a2_ddag, s);
    for (int k = 0; k < label.n1; ++k) s = apply(ops.a1_ddag, s);
    s.amplitudes *= scale;
    s.role = role;
    return s;
  };

  return {label, theta, build(theta, method, StateRole::ket),
          build(theta.negated(), method, StateRole::dual_bra)};
}

std::vector<BarredState> barred_fock_ladder(const FockBasis& basis, int max_n1,
                                            int max_n2, ThetaOrBranch theta,
                                            VacuumMethod method, double tol) {
  if (max_n1 < 0 || max_n2 < 0)
    throw DomainError("barred_fock_ladder: caps must be >= 0");
  const int reserve = max_n1 + max_n2 + 2;
  if (std::max(max_n1, max_n2) > basis.n_max() - reserve) {
    throw CapacityError(
        "barred_fock_ladder: grid up to (" + std::to_string(max_n1) + ", " +
        std::to_string(max_n2) + ") needs n_max >= " +
        std::to_string(std::max(max_n1, max_n2) + reserve) + ", have " +
        std::to_string(basis.n_max()));
  }

  // Unnormalized towers built incrementally: a2_ddag powers first, then
  // a1_ddag on top, matching the single-state operator order.
  const auto towers = [&](ThetaOrBranch t) {
    const auto ops = build_barred_linear(basis, t);
    std::vector<StateVector> grid;
    grid.reserve(static_cast<std::size_t>(max_n1 + 1) * (max_n2 + 1));
    StateVector column = bogoliubov_vacuum(basis, t, method, tol);
    for (int n2 = 0; n2 <= max_n2; ++n2) {
      if (n2 > 0) column = apply(ops.a2_ddag, column);
      StateVector s = column;
      for (int n1 = 0; n1 <= max_n1; ++n1) {
        if (n1 > 0) s = apply(ops.a1_ddag, s);
        grid.push_back(s);
      }
    }
    return grid;  // indexed n2*(max_n1+1) + n1
  };

  const auto kets = towers(theta);
  const auto duals = towers(theta.negated());

  std::vector<BarredState> out;
  out.reserve(kets.size());
  for (int n1 = 0; n1 <= max_n1; ++n1) {
    for (int n2 = 0; n2 <= max_n2; ++n2) {
      const std::size_t k = static_cast<std::size_t>(n2) * (max_n1 + 1) + n1;
      const double scale = 1.0 / std::sqrt(factorial(n1) * factorial(n2));
      StateVector ket = kets[k];
      ket.amplitudes *= scale;
      StateVector dual = duals[k];
      dual.amplitudes *= scale;
      dual.role = StateRole::dual_bra;
      out.push_back({{n1, n2}, theta, std::move(ket), std::move(dual)});
    }
  }
  return out;
}

PairingSum proper_inner_diagnostics(const StateVector& bra,
                                    const StateVector& ket, double rel_tol) {
  if (!(bra.basis == ket.basis))
    throw DimensionError("proper_inner: basis mismatch");

  const int shells = 2 * bra.basis.n_max() + 1;
  std::vector<Complex> shell_terms(shells, Complex{});
  for (Eigen::Index k = 0; k < bra.basis.dimension(); ++k) {
    const FockIndex idx = bra.basis.fock_of(k);
    shell_terms[idx.n1 + idx.n2] +=
        std::conj(bra.amplitudes(k)) * ket.amplitudes(k);
  }

  PairingSum out;
  out.shell_sums.resize(shells);
  Complex running{};
  for (int s = 0; s < shells; ++s) {
    running += shell_terms[s];
    out.shell_sums[s] = running;
  }
  out.value = running;

  const int window = std::min(4, shells);
  double tail = 0.0;
  for (int s = shells - window; s < shells; ++s)
    tail = std::max(tail, std::abs(shell_terms[s]));
  out.converged = tail <= rel_tol * std::max(1.0, std::abs(out.value));
  return out;
}

Complex proper_inner(const StateVector& bra, const StateVector& ket) {
  if (bra.role != StateRole::dual_bra || ket.role != StateRole::ket) {
    throw DomainError(
        "proper_inner: expects a dual bra on the left and a ket on the right");
  }
  const PairingSum sum = proper_inner_diagnostics(bra, ket);
  if (!sum.converged) {
    throw ConvergenceError(
        "proper_inner: Fock-side partial sums do not converge (branch "
        "pairing); evaluate through the position representation instead");
  }
  return sum.value;
}

Complex eigenvalue_ft(FockIndex label, const PhysParams& p, SignBranch branch) {
  if (label.n1 < 0 || label.n2 < 0)
    throw DomainError("eigenvalue_ft: occupation labels must be >= 0");
  const double re = p.hbar * p.omega * (label.n1 - label.n2);
  const double im = branch_sign(branch) * p.hbar * p.gamma / (2.0 * p.mass) *
                    (label.n1 + label.n2 + 1);
  return {re, im};
}

Complex eigenvalue_is(FockIndex label, const PhysParams& p, SignBranch branch) {
  if (label.n1 < 0 || label.n2 < 0)
    throw DomainError("eigenvalue_is: occupation labels must be >= 0");
  const double re = p.hbar * p.omega * (label.n1 + label.n2 + 1);
  const double im = branch_sign(branch) * p.hbar * p.gamma / (2.0 * p.mass) *
                    (label.n1 - label.n2);
  return {re, im};
}

double eigen_residual(const OperatorMatrix& h, const BarredState& state,
                      Complex e, int margin) {
  if (!(h.basis == state.ket.basis))
    throw DimensionError("eigen_residual: basis mismatch");
  const InteriorBlock block{margin};
  const auto idx = block.indices(h.basis);
  const Vector residual =
      (h.entries * state.ket.amplitudes - e * state.ket.amplitudes)(idx);
  const Vector restricted = state.ket.amplitudes(idx);
  const double denom = restricted.norm();
  if (denom == 0.0) {
    throw DegeneracyError(
        "eigen_residual: ket restricted to the interior block has zero norm");
  }
  return residual.norm() / denom;
}

}  // namespace bateman
