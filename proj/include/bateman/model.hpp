#pragma once

#include <optional>

#include "bateman/fockspace.hpp"
#include "bateman/types.hpp"

namespace bateman {

/// Physical parameters of the damped-oscillator pair.
struct PhysParams {
  double mass = 1.0;
  double omega = 1.0;
  double gamma = 0.0;
  double hbar = 1.0;

  void validate() const;

  friend bool operator==(const PhysParams&, const PhysParams&) = default;
};

/// Sign branch tied to theta = +pi/4 (plus) or -pi/4 (minus); the same
/// choice selects the +- sign throughout the barred Hamiltonian and both
/// eigenvalue formulas.
enum class SignBranch { plus, minus };

SignBranch opposite(SignBranch branch);
double branch_sign(SignBranch branch);  // +1 or -1
double branch_theta(SignBranch branch);  // +-pi/4

/// Either a generic real mixing angle theta or one of the two exact
/// branches theta = +-pi/4. Branch values carry exact coefficients
/// (tan = +-1, sec = sqrt(2)) instead of going through trig calls.
class ThetaOrBranch {
 public:
  ThetaOrBranch(double theta) : theta_(theta) {}            // NOLINT(runtime/explicit)
  ThetaOrBranch(SignBranch branch)                          // NOLINT(runtime/explicit)
      : theta_(branch_theta(branch)), branch_(branch) {}

  double theta() const { return theta_; }
  bool is_branch() const { return branch_.has_value(); }
  SignBranch branch() const;

  double tan() const;
  double sec() const;

  /// theta -> -theta (branches swap); maps a ket construction to its dual.
  ThetaOrBranch negated() const;

 private:
  double theta_;
  std::optional<SignBranch> branch_;
};

/// The four pseudo-Bogoliubov operators; `ddag` marks the structural
/// double-dagger partner, which is not the Hermitian adjoint for theta != 0.
struct BarredOperators {
  OperatorMatrix a1;
  OperatorMatrix a2;
  OperatorMatrix a1_ddag;
  OperatorMatrix a2_ddag;
};

/// X = a1 a2 + a1^dag a2^dag; symmetric entrywise.
OperatorMatrix build_x(const FockBasis& basis);

/// H = hbar*omega (a1^dag a1 - a2^dag a2) + i hbar*gamma/(2m) (a1 a2 - a1^dag a2^dag).
/// Non-Hermitian whenever gamma > 0.
OperatorMatrix build_h_original(const FockBasis& basis, const PhysParams& p);

/// Barred operators as linear combinations, valid for any real theta:
///   a1_bar = cos(t) a1 - sin(t) a2^dag     a2_bar = -sin(t) a1^dag + cos(t) a2
///   a1_ddag = cos(t) a1^dag + sin(t) a2    a2_ddag = sin(t) a1 + cos(t) a2^dag
/// At theta = +-pi/4 this is the pseudo-Bogoliubov transformation.
BarredOperators build_barred_linear(const FockBasis& basis,
                                    ThetaOrBranch theta);

/// Barred operators by conjugation exp(theta X) a exp(-theta X). Accepts
/// complex theta. Agreement with the linear form is an interior-block
/// property; truncation breaks conjugation at the edge.
BarredOperators build_barred_conjugated(const FockBasis& basis, Complex theta,
                                        double tol);

/// H rebuilt from the branch operators:
///   hbar*omega (a1_ddag a1_bar - a2_ddag a2_bar)
///   +- i hbar*gamma/(2m) (a1_ddag a1_bar + a2_ddag a2_bar + 1).
OperatorMatrix build_h_barred(const FockBasis& basis, const PhysParams& p,
                              SignBranch branch);

}  // namespace bateman
