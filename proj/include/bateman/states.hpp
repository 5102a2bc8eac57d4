#pragma once

#include <vector>

#include "bateman/fockspace.hpp"
#include "bateman/model.hpp"
#include "bateman/types.hpp"

namespace bateman {

/// How the Bogoliubov vacuum is constructed.
///
/// taylor       exp(theta X) applied to the naive vacuum; real |theta| < pi/4.
/// closed_form  amplitudes sec(t) tan(t)^n on the pair states |n,n>;
///              real |theta| < pi/4.
/// kernel       one-dimensional joint nullspace of the barred lowering
///              operators; accepts the branches theta = +-pi/4 and any real
///              theta with cos(theta) > 0.
enum class VacuumMethod { taylor, closed_form, kernel };

/// A barred Fock state: ket and its dual bra, biorthonormal against the
/// other labels under the proper pairing.
struct BarredState {
  FockIndex label;
  ThetaOrBranch theta;
  StateVector ket;
  StateVector dual_bra;
};

/// Closed-form pair-diagonal vacuum amplitude sec(t) tan(t)^n; exactly
/// sqrt(2) (+-1)^n at the branches. Defined for every real theta with
/// cos(theta) != 0 and used by the improper-pairing analysis as well.
double closed_form_pair_amplitude(ThetaOrBranch theta, int n);

/// Unit vector at (0,0); annihilated by both unbarred lowering operators.
StateVector vacuum_naive(const FockBasis& basis);

StateVector bogoliubov_vacuum(const FockBasis& basis, ThetaOrBranch theta,
                              VacuumMethod method, double tol);

/// Dual-side vacuum: the theta -> -theta construction, stored as a column v
/// with <<0| = v^H; role is dual_bra.
StateVector bogoliubov_dual_vacuum(const FockBasis& basis, ThetaOrBranch theta,
                                   VacuumMethod method, double tol);

/// Ladder state (a1_ddag)^n1 (a2_ddag)^n2 |0>> / sqrt(n1! n2!) plus its dual.
/// Requires truncation headroom: max(n1,n2) <= n_max - (n1+n2+2), otherwise
/// CapacityError.
BarredState barred_fock_state(const FockBasis& basis, FockIndex label,
                              ThetaOrBranch theta, VacuumMethod method,
                              double tol = 1e-12);

/// The full grid of barred states with n1 <= max_n1, n2 <= max_n2, built
/// from a single vacuum construction and returned row-major in n1 (stride
/// max_n2 + 1). The largest label must satisfy the headroom bound.
std::vector<BarredState> barred_fock_ladder(const FockBasis& basis, int max_n1,
                                            int max_n2, ThetaOrBranch theta,
                                            VacuumMethod method,
                                            double tol = 1e-12);

/// Pairing sum with a truncated-series convergence diagnostic. Partial sums
/// are accumulated shell by shell (shell N collects states with
/// n1 + n2 = N); the pairing is declared converged when the last shells'
/// increments have decayed. At the branches the vacuum pairing oscillates
/// (2, 0, 2, 0, ... over the pair levels) and is flagged non-convergent.
struct PairingSum {
  Complex value{};
  bool converged = false;
  std::vector<Complex> shell_sums;  // partial sums after each shell
};

PairingSum proper_inner_diagnostics(const StateVector& bra,
                                    const StateVector& ket,
                                    double rel_tol = 1e-8);

/// Proper pairing sum_k conj(bra_k) ket_k between a dual bra and a ket.
/// Throws DomainError when the roles are not (dual_bra, ket) and
/// ConvergenceError when the shell diagnostic flags non-convergence.
Complex proper_inner(const StateVector& bra, const StateVector& ket);

/// hbar*omega (n1 - n2) +- i hbar*gamma/(2m) (n1 + n2 + 1).
Complex eigenvalue_ft(FockIndex label, const PhysParams& p, SignBranch branch);

/// hbar*omega (n1 + n2 + 1) +- i hbar*gamma/(2m) (n1 - n2).
Complex eigenvalue_is(FockIndex label, const PhysParams& p, SignBranch branch);

/// || (H ket - e ket) restricted to InteriorBlock(margin) ||_2
///   / || ket restricted ||_2.
/// Meaningful against build_h_original only for branch states.
double eigen_residual(const OperatorMatrix& h, const BarredState& state,
                      Complex e, int margin);

}  // namespace bateman
