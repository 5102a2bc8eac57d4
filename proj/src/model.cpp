#include "bateman/model.hpp"

#include <cmath>
#include <string>

namespace bateman {

namespace {
constexpr Complex kI{0.0, 1.0};
}

void PhysParams::validate() const {
  if (!(mass > 0.0)) throw DomainError("PhysParams: mass must be positive");
  if (!(omega > 0.0)) throw DomainError("PhysParams: omega must be positive");
  if (!(gamma >= 0.0))
    throw DomainError("PhysParams: gamma must be non-negative");
  if (!(hbar > 0.0)) throw DomainError("PhysParams: hbar must be positive");
}

SignBranch opposite(SignBranch branch) {
  return branch == SignBranch::plus ? SignBranch::minus : SignBranch::plus;
}

double branch_sign(SignBranch branch) {
  return branch == SignBranch::plus ? 1.0 : -1.0;
}

double branch_theta(SignBranch branch) {
  return branch_sign(branch) * (M_PI / 4.0);
}

SignBranch ThetaOrBranch::branch() const {
  if (!branch_) throw DomainError("ThetaOrBranch: not a branch value");
  return *branch_;
}

double ThetaOrBranch::tan() const {
  return branch_ ? branch_sign(*branch_) : std::tan(theta_);
}

double ThetaOrBranch::sec() const {
  return branch_ ? std::sqrt(2.0) : 1.0 / std::cos(theta_);
}

ThetaOrBranch ThetaOrBranch::negated() const {
  if (branch_) return ThetaOrBranch(opposite(*branch_));
  return ThetaOrBranch(-theta_);
}

OperatorMatrix build_x(const FockBasis& basis) {
  const auto a1 = ladder_matrix(basis, Mode::one, LadderKind::lower);
  const auto a2 = ladder_matrix(basis, Mode::two, LadderKind::lower);
  const auto r1 = ladder_matrix(basis, Mode::one, LadderKind::raise);
  const auto r2 = ladder_matrix(basis, Mode::two, LadderKind::raise);
  return a1 * a2 + r1 * r2;
}

OperatorMatrix build_h_original(const FockBasis& basis, const PhysParams& p) {
  p.validate();
  const auto a1 = ladder_matrix(basis, Mode::one, LadderKind::lower);
  const auto a2 = ladder_matrix(basis, Mode::two, LadderKind::lower);
  const auto r1 = ladder_matrix(basis, Mode::one, LadderKind::raise);
  const auto r2 = ladder_matrix(basis, Mode::two, LadderKind::raise);
  const Complex hw{p.hbar * p.omega, 0.0};
  const Complex damping = kI * (p.hbar * p.gamma / (2.0 * p.mass));
  return hw * (r1 * a1 - r2 * a2) + damping * (a1 * a2 - r1 * r2);
}

BarredOperators build_barred_linear(const FockBasis& basis,
                                    ThetaOrBranch theta) {
  // sin = tan * cos keeps the branch values exact (+-1/sqrt(2)).
  const double c = 1.0 / theta.sec();
  const double s = theta.tan() * c;
  const auto a1 = ladder_matrix(basis, Mode::one, LadderKind::lower);
  const auto a2 = ladder_matrix(basis, Mode::two, LadderKind::lower);
  const auto r1 = ladder_matrix(basis, Mode::one, LadderKind::raise);
  const auto r2 = ladder_matrix(basis, Mode::two, LadderKind::raise);
  const Complex cc{c, 0.0}, ss{s, 0.0};
  return {
      cc * a1 - ss * r2,  // a1_bar
      cc * a2 - ss * r1,  // a2_bar
      cc * r1 + ss * a2,  // a1_ddag
      cc * r2 + ss * a1,  // a2_ddag
  };
}

BarredOperators build_barred_conjugated(const FockBasis& basis, Complex theta,
                                        double tol) {
  const auto x = build_x(basis);
  const auto fwd = matrix_exp(theta * x, tol);
  const auto bwd = matrix_exp(-theta * x, tol);
  const auto conj = [&](const OperatorMatrix& op) {
    return fwd * op * bwd;
  };
  return {
      conj(ladder_matrix(basis, Mode::one, LadderKind::lower)),
      conj(ladder_matrix(basis, Mode::two, LadderKind::lower)),
      conj(ladder_matrix(basis, Mode::one, LadderKind::raise)),
      conj(ladder_matrix(basis, Mode::two, LadderKind::raise)),
  };
}

OperatorMatrix build_h_barred(const FockBasis& basis, const PhysParams& p,
                              SignBranch branch) {
  p.validate();
  const auto ops = build_barred_linear(basis, ThetaOrBranch(branch));
  const auto n1 = ops.a1_ddag * ops.a1;
  const auto n2 = ops.a2_ddag * ops.a2;
  const Complex hw{p.hbar * p.omega, 0.0};
  const Complex damping =
      branch_sign(branch) * kI * (p.hbar * p.gamma / (2.0 * p.mass));
  return hw * (n1 - n2) + damping * (n1 + n2 + identity_matrix(basis));
}

}  // namespace bateman
