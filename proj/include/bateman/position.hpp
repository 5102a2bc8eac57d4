#pragma once

#include <array>
#include <vector>

#include "bateman/fockspace.hpp"
#include "bateman/model.hpp"
#include "bateman/types.hpp"

namespace bateman {

/// Label (n1, n2) plus physical parameters of one Hermite-Gaussian product
/// eigenfunction.
struct WavefunctionSpec {
  int n1 = 0;
  int n2 = 0;
  PhysParams p;
};

/// Gauss-Hermite rule: integrates f against exp(-xi^2) on the real line.
struct QuadratureRule {
  RealVector nodes;
  RealVector weights;
};

/// Physicists' Hermite polynomial H_n and its derivative 2n H_{n-1}.
struct HermiteEval {
  double value = 0.0;
  double derivative = 0.0;
};

HermiteEval hermite(int n, double xi);

/// Value of the normalized eigenfunction
///   [2^(n1+n2) n1! n2!]^{-1/2} (m omega / pi hbar)^{1/2}
///   H_{n1}(xi1) H_{n2}(xi2) exp(-(xi1^2 + xi2^2)/2),
/// with xi_i = sqrt(m omega / hbar) x_i. Evaluated by the normalized
/// recurrence, stable for large n.
double eigenfunction(const WavefunctionSpec& spec, double x1, double x2);

/// Value plus dimensionless gradient (d/dxi1, d/dxi2).
struct PointEval {
  double value = 0.0;
  double dxi1 = 0.0;
  double dxi2 = 0.0;
};
PointEval eigenfunction_with_gradient(const WavefunctionSpec& spec, double x1,
                                      double x2);

/// Nodes are the roots of H_k via the symmetric-tridiagonal (Golub-Welsch)
/// construction; weights positive and symmetric, summing to sqrt(pi).
QuadratureRule gauss_hermite_rule(int k);

/// Gram matrix of pairwise L2(R^2) inner products over the tensorized rule
/// with the Gaussian factor absorbed into the weight. All specs must share
/// PhysParams; needs node count >= max(n)+1, else ExactnessError.
Matrix l2_gram(const std::vector<WavefunctionSpec>& specs,
               const QuadratureRule& rule);

/// A function expanded over the Hermite-Gaussian product basis of shared
/// physical parameters: f = sum_{n1,n2} coeff(n1,n2) phi_{n1,n2}.
/// First-order operators act exactly through the Hermite recurrences.
class WaveExpansion {
 public:
  WaveExpansion(PhysParams p, Matrix coeff);
  static WaveExpansion basis_state(const WavefunctionSpec& spec);

  const PhysParams& params() const { return p_; }
  const Matrix& coeff() const { return coeff_; }

  /// Multiplication by xi_axis: coeff shifts with sqrt(n/2) factors.
  WaveExpansion mult_xi(Mode axis) const;
  /// d/dxi_axis.
  WaveExpansion d_xi(Mode axis) const;

  WaveExpansion scaled(Complex s) const;
  WaveExpansion plus(const WaveExpansion& other) const;
  WaveExpansion minus(const WaveExpansion& other) const;

  /// Pointwise value at physical coordinates.
  Complex eval(double x1, double x2) const;
  /// Value with the Gaussian envelope and physical prefactor stripped,
  /// at dimensionless (xi1, xi2); polynomial in the xi's.
  Complex eval_nogauss(double xi1, double xi2) const;

  /// L2 norm over the tensorized rule (Gaussian folded into the weight).
  double l2_norm(const QuadratureRule& rule) const;

 private:
  PhysParams p_;
  Matrix coeff_;  // coeff(n1, n2)
};

enum class Representation { original, barred };

/// First-order differential operator with linear coefficients in the
/// dimensionless variables: cx1*xi1 + cx2*xi2 + cd1*d1 + cd2*d2.
struct DiffOpRep {
  Representation representation = Representation::barred;
  double cx1 = 0.0;
  double cx2 = 0.0;
  double cd1 = 0.0;
  double cd2 = 0.0;
};

/// Canonical ladder descriptor: in the barred representation the barred
/// operators take the form (xi_i +- d_i)/sqrt(2); in the original
/// representation the unbarred operators take the identical form.
DiffOpRep ladder_diff_op(Representation rep, Mode mode, LadderKind kind);

/// Barred operator written in the original representation: the branch-mixed
/// first-order form, e.g. a1_bar -> [(xi1 -+ xi2) + (d1 +- d2)]/2.
DiffOpRep barred_in_original_diff_op(Mode mode, LadderKind kind,
                                     SignBranch branch);

WaveExpansion apply_diff_op(const DiffOpRep& op, const WaveExpansion& f);

/// Ladder action on a single basis function, expressed as coefficients:
/// lower -> sqrt(n_i) with n_i - 1 (zero function below zero),
/// raise -> sqrt(n_i + 1) with n_i + 1. Only the barred representation
/// carries this action; passing original throws DomainError.
WaveExpansion apply_ladder_diff(Representation rep, Mode mode, LadderKind kind,
                                const WavefunctionSpec& spec);

/// Relative L2 residual || H_x phi - E phi || / || phi || with
///   H_x = (hbar omega/2) [(xi1^2 - d1^2) - (xi2^2 - d2^2)]
///         +- i (hbar gamma/2m) (1/2) [(xi1^2 - d1^2) + (xi2^2 - d2^2)]
/// applied through the recurrences and E the branch eigenvalue of (n1, n2).
double hamiltonian_diff_residual(const WavefunctionSpec& spec,
                                 const PhysParams& p, SignBranch branch,
                                 const QuadratureRule& rule);

using GridPoint = std::array<double, 2>;
std::vector<GridPoint> make_grid(double lo, double hi, double step);

/// max over the grid of |(xi_i + d_i) phi_00| for i = 1, 2, with analytic
/// derivatives. Only the (0,0) spec is accepted.
double vacuum_pde_residual(const WavefunctionSpec& spec, const PhysParams& p,
                           const std::vector<GridPoint>& grid);

/// Unit-mass Gaussian mollifier of width sigma in the variable x1 - x2
/// (plus branch) or x1 + x2 (minus branch).
struct Mollifier {
  double sigma = 0.1;
  SignBranch branch = SignBranch::plus;

  double density(double u) const;  // exp(-u^2/(2 sigma^2)) / (sigma sqrt(2 pi))
};

/// Test function q(x1, x2) * exp(-(x1^2 + x2^2)/2) with q of degree <= 2.
struct TestFunction {
  double c00 = 0.0, c10 = 0.0, c01 = 0.0;
  double c20 = 0.0, c11 = 0.0, c02 = 0.0;

  double value(double x1, double x2) const;
  std::array<double, 2> gradient(double x1, double x2) const;
};

/// The default family: {1, x1, x2, x1^2, x1 x2, x2^2} times the Gaussian.
std::vector<TestFunction> default_test_family();

struct WeakResiduals {
  double w17a = 0.0;  // integral of test * (x1 -+ x2) * delta_sigma
  double w17b = 0.0;  // integral of test * (d1 +- d2) delta_sigma, by parts
};

WeakResiduals mollified_weak_residual(const Mollifier& moll,
                                      const TestFunction& test,
                                      const QuadratureRule& rule);

/// Partial sum sum_{n < n_terms} c_n phi_n(x1) phi_n(x2) of the mixed
/// pairing, with c_n the closed-form vacuum amplitudes (dimensionless
/// oscillator functions). At the branches the sum concentrates on the
/// diagonal and grows without bound there.
double improper_partial_sum(int n_terms, ThetaOrBranch theta, double x1,
                            double x2);

}  // namespace bateman
