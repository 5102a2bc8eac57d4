#include "bateman/position.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace bateman {

namespace {

constexpr Complex kI{0.0, 1.0};
const double kQuarterRootPi = std::pow(M_PI, -0.25);

/// Orthonormal Hermite values b_n(xi) = H_n(xi) / sqrt(2^n n! sqrt(pi)),
/// optionally with the Gaussian exp(-xi^2/2) folded into the start value.
RealVector hermite_row(int n_cap, double xi, bool with_gaussian) {
  RealVector out(n_cap + 1);
  double prev = 0.0;
  double cur = with_gaussian ? kQuarterRootPi * std::exp(-0.5 * xi * xi)
                             : kQuarterRootPi;
  out(0) = cur;
  for (int n = 0; n < n_cap; ++n) {
    const double next = xi * std::sqrt(2.0 / (n + 1)) * cur -
                        std::sqrt(double(n) / (n + 1)) * prev;
    out(n + 1) = next;
    prev = cur;
    cur = next;
  }
  return out;
}

double xi_scale(const PhysParams& p) {
  return std::sqrt(p.mass * p.omega / p.hbar);
}

void require_valid_spec(const WavefunctionSpec& spec, const char* where) {
  if (spec.n1 < 0 || spec.n2 < 0)
    throw DomainError(std::string(where) + ": occupation labels must be >= 0");
  spec.p.validate();
}

}  // namespace

HermiteEval hermite(int n, double xi) {
  if (n < 0) throw DomainError("hermite: n must be >= 0");
  double prev = 0.0;
  double cur = 1.0;
  for (int k = 0; k < n; ++k) {
    const double next = 2.0 * xi * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return {cur, 2.0 * n * prev};
}

double eigenfunction(const WavefunctionSpec& spec, double x1, double x2) {
  return eigenfunction_with_gradient(spec, x1, x2).value;
}

PointEval eigenfunction_with_gradient(const WavefunctionSpec& spec, double x1,
                                      double x2) {
  require_valid_spec(spec, "eigenfunction");
  const double scale = xi_scale(spec.p);
  const double xi1 = scale * x1;
  const double xi2 = scale * x2;
  const int cap = std::max(spec.n1, spec.n2);
  const RealVector b1 = hermite_row(cap, xi1, true);
  const RealVector b2 = hermite_row(cap, xi2, true);
  const double pref = scale;  // sqrt(m omega / hbar)

  const double f1 = b1(spec.n1);
  const double f2 = b2(spec.n2);
  const double d1 =
      (spec.n1 > 0 ? std::sqrt(2.0 * spec.n1) * b1(spec.n1 - 1) : 0.0) -
      xi1 * f1;
  const double d2 =
      (spec.n2 > 0 ? std::sqrt(2.0 * spec.n2) * b2(spec.n2 - 1) : 0.0) -
      xi2 * f2;
  return {pref * f1 * f2, pref * d1 * f2, pref * f1 * d2};
}

QuadratureRule gauss_hermite_rule(int k) {
  if (k < 1) throw DomainError("gauss_hermite_rule: need k >= 1");
  RealVector diag = RealVector::Zero(k);
  RealVector sub(std::max(k - 1, 0));
  for (int j = 1; j < k; ++j) sub(j - 1) = std::sqrt(0.5 * j);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("gauss_hermite_rule: tridiagonal solve failed");

  const double mu0 = std::sqrt(M_PI);
  QuadratureRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights.resize(k);
  for (int i = 0; i < k; ++i) {
    const double first = solver.eigenvectors()(0, i);
    rule.weights(i) = mu0 * first * first;
  }
  // enforce the +- symmetry of the rule exactly
  for (int i = 0; i < k / 2; ++i) {
    const int j = k - 1 - i;
    const double x = 0.5 * (rule.nodes(j) - rule.nodes(i));
    rule.nodes(i) = -x;
    rule.nodes(j) = x;
    const double w = 0.5 * (rule.weights(i) + rule.weights(j));
    rule.weights(i) = w;
    rule.weights(j) = w;
  }
  if (k % 2 == 1) rule.nodes((k - 1) / 2) = 0.0;
  return rule;
}

Matrix l2_gram(const std::vector<WavefunctionSpec>& specs,
               const QuadratureRule& rule) {
  if (specs.empty()) return Matrix(0, 0);
  int cap = 0;
  for (const auto& s : specs) {
    require_valid_spec(s, "l2_gram");
    if (!(s.p == specs.front().p))
      throw DomainError("l2_gram: specs must share PhysParams");
    cap = std::max({cap, s.n1, s.n2});
  }
  if (rule.nodes.size() < cap + 1) {
    throw ExactnessError("l2_gram: " + std::to_string(rule.nodes.size()) +
                         " nodes cannot integrate degree " +
                         std::to_string(2 * cap) + " exactly; need >= " +
                         std::to_string(cap + 1));
  }

  // Per-axis quadrature gram of the orthonormal Hermite factors; the
  // tensorized 2D pairing factorizes over the axes.
  Eigen::MatrixXd axis = Eigen::MatrixXd::Zero(cap + 1, cap + 1);
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
    const RealVector b = hermite_row(cap, rule.nodes(i), false);
    axis += rule.weights(i) * (b * b.transpose());
  }

  const auto n = static_cast<Eigen::Index>(specs.size());
  Matrix gram(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      gram(a, b) = Complex(
          axis(specs[a].n1, specs[b].n1) * axis(specs[a].n2, specs[b].n2), 0.0);
  return gram;
}

WaveExpansion::WaveExpansion(PhysParams p, Matrix coeff)
    : p_(p), coeff_(std::move(coeff)) {
  p_.validate();
  if (coeff_.rows() == 0 || coeff_.cols() == 0)
    throw DomainError("WaveExpansion: empty coefficient matrix");
}

WaveExpansion WaveExpansion::basis_state(const WavefunctionSpec& spec) {
  require_valid_spec(spec, "WaveExpansion::basis_state");
  Matrix c = Matrix::Zero(spec.n1 + 1, spec.n2 + 1);
  c(spec.n1, spec.n2) = Complex(1.0, 0.0);
  return {spec.p, std::move(c)};
}

WaveExpansion WaveExpansion::mult_xi(Mode axis) const {
  const Eigen::Index rows = coeff_.rows(), cols = coeff_.cols();
  const bool first = axis == Mode::one;
  Matrix out = Matrix::Zero(rows + (first ? 1 : 0), cols + (first ? 0 : 1));
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const Complex c = coeff_(i, j);
      if (c == Complex{}) continue;
      const Eigen::Index n = first ? i : j;
      // xi b_n = sqrt((n+1)/2) b_{n+1} + sqrt(n/2) b_{n-1}
      const double up = std::sqrt(0.5 * (n + 1));
      if (first) {
        out(i + 1, j) += up * c;
        if (i > 0) out(i - 1, j) += std::sqrt(0.5 * n) * c;
      } else {
        out(i, j + 1) += up * c;
        if (j > 0) out(i, j - 1) += std::sqrt(0.5 * n) * c;
      }
    }
  }
  return {p_, std::move(out)};
}

WaveExpansion WaveExpansion::d_xi(Mode axis) const {
  const Eigen::Index rows = coeff_.rows(), cols = coeff_.cols();
  const bool first = axis == Mode::one;
  Matrix out = Matrix::Zero(rows + (first ? 1 : 0), cols + (first ? 0 : 1));
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const Complex c = coeff_(i, j);
      if (c == Complex{}) continue;
      const Eigen::Index n = first ? i : j;
      // d/dxi b_n = sqrt(n/2) b_{n-1} - sqrt((n+1)/2) b_{n+1}
      const double up = std::sqrt(0.5 * (n + 1));
      if (first) {
        out(i + 1, j) -= up * c;
        if (i > 0) out(i - 1, j) += std::sqrt(0.5 * n) * c;
      } else {
        out(i, j + 1) -= up * c;
        if (j > 0) out(i, j - 1) += std::sqrt(0.5 * n) * c;
      }
    }
  }
  return {p_, std::move(out)};
}

WaveExpansion WaveExpansion::scaled(Complex s) const {
  return {p_, Matrix(s * coeff_)};
}

WaveExpansion WaveExpansion::plus(const WaveExpansion& other) const {
  if (!(p_ == other.p_))
    throw DomainError("WaveExpansion: mismatched PhysParams");
  const Eigen::Index rows = std::max(coeff_.rows(), other.coeff_.rows());
  const Eigen::Index cols = std::max(coeff_.cols(), other.coeff_.cols());
  Matrix out = Matrix::Zero(rows, cols);
  out.topLeftCorner(coeff_.rows(), coeff_.cols()) = coeff_;
  out.topLeftCorner(other.coeff_.rows(), other.coeff_.cols()) += other.coeff_;
  return {p_, std::move(out)};
}

WaveExpansion WaveExpansion::minus(const WaveExpansion& other) const {
  return plus(other.scaled(Complex(-1.0, 0.0)));
}

Complex WaveExpansion::eval_nogauss(double xi1, double xi2) const {
  const RealVector b1 = hermite_row(int(coeff_.rows()) - 1, xi1, false);
  const RealVector b2 = hermite_row(int(coeff_.cols()) - 1, xi2, false);
  Complex acc{};
  for (Eigen::Index i = 0; i < coeff_.rows(); ++i)
    for (Eigen::Index j = 0; j < coeff_.cols(); ++j)
      acc += coeff_(i, j) * b1(i) * b2(j);
  return acc;
}

Complex WaveExpansion::eval(double x1, double x2) const {
  const double scale = xi_scale(p_);
  const double xi1 = scale * x1;
  const double xi2 = scale * x2;
  return scale * std::exp(-0.5 * (xi1 * xi1 + xi2 * xi2)) *
         eval_nogauss(xi1, xi2);
}

double WaveExpansion::l2_norm(const QuadratureRule& rule) const {
  // The physical prefactor and the xi Jacobian cancel: the tensorized rule
  // over the stripped values is the L2(dx1 dx2) norm directly.
  double acc = 0.0;
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
    for (Eigen::Index j = 0; j < rule.nodes.size(); ++j) {
      const Complex v = eval_nogauss(rule.nodes(i), rule.nodes(j));
      acc += rule.weights(i) * rule.weights(j) * std::norm(v);
    }
  }
  return std::sqrt(acc);
}

DiffOpRep ladder_diff_op(Representation rep, Mode mode, LadderKind kind) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const double deriv = kind == LadderKind::lower ? inv_sqrt2 : -inv_sqrt2;
  DiffOpRep op;
  op.representation = rep;
  if (mode == Mode::one) {
    op.cx1 = inv_sqrt2;
    op.cd1 = deriv;
  } else {
    op.cx2 = inv_sqrt2;
    op.cd2 = deriv;
  }
  return op;
}

DiffOpRep barred_in_original_diff_op(Mode mode, LadderKind kind,
                                     SignBranch branch) {
  const double s = branch_sign(branch);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const auto combine = [&](DiffOpRep a, double ca, DiffOpRep b, double cb) {
    DiffOpRep out;
    out.representation = Representation::original;
    out.cx1 = ca * a.cx1 + cb * b.cx1;
    out.cx2 = ca * a.cx2 + cb * b.cx2;
    out.cd1 = ca * a.cd1 + cb * b.cd1;
    out.cd2 = ca * a.cd2 + cb * b.cd2;
    return out;
  };
  const auto orig = [](Mode m, LadderKind k) {
    return ladder_diff_op(Representation::original, m, k);
  };
  if (kind == LadderKind::lower) {
    if (mode == Mode::one) {
      // a1_bar = (a1 -+ a2^dag)/sqrt(2)
      return combine(orig(Mode::one, LadderKind::lower), inv_sqrt2,
                     orig(Mode::two, LadderKind::raise), -s * inv_sqrt2);
    }
    // a2_bar = (-+ a1^dag + a2)/sqrt(2)
    return combine(orig(Mode::one, LadderKind::raise), -s * inv_sqrt2,
                   orig(Mode::two, LadderKind::lower), inv_sqrt2);
  }
  if (mode == Mode::one) {
    // a1_ddag = (a1^dag +- a2)/sqrt(2)
    return combine(orig(Mode::one, LadderKind::raise), inv_sqrt2,
                   orig(Mode::two, LadderKind::lower), s * inv_sqrt2);
  }
  // a2_ddag = (+- a1 + a2^dag)/sqrt(2)
  return combine(orig(Mode::one, LadderKind::lower), s * inv_sqrt2,
                 orig(Mode::two, LadderKind::raise), inv_sqrt2);
}

WaveExpansion apply_diff_op(const DiffOpRep& op, const WaveExpansion& f) {
  WaveExpansion out = f.scaled(Complex{});
  if (op.cx1 != 0.0) out = out.plus(f.mult_xi(Mode::one).scaled(op.cx1));
  if (op.cd1 != 0.0) out = out.plus(f.d_xi(Mode::one).scaled(op.cd1));
  if (op.cx2 != 0.0) out = out.plus(f.mult_xi(Mode::two).scaled(op.cx2));
  if (op.cd2 != 0.0) out = out.plus(f.d_xi(Mode::two).scaled(op.cd2));
  return out;
}

WaveExpansion apply_ladder_diff(Representation rep, Mode mode, LadderKind kind,
                                const WavefunctionSpec& spec) {
  if (rep != Representation::barred) {
    throw DomainError(
        "apply_ladder_diff: only the barred representation carries the "
        "canonical ladder action on these eigenfunctions");
  }
  return apply_diff_op(ladder_diff_op(rep, mode, kind),
                       WaveExpansion::basis_state(spec));
}

double hamiltonian_diff_residual(const WavefunctionSpec& spec,
                                 const PhysParams& p, SignBranch branch,
                                 const QuadratureRule& rule) {
  require_valid_spec(spec, "hamiltonian_diff_residual");
  p.validate();
  const int need = std::max(spec.n1, spec.n2) + 3;
  if (rule.nodes.size() < need) {
    throw ExactnessError(
        "hamiltonian_diff_residual: need >= " + std::to_string(need) +
        " nodes for degree " + std::to_string(2 * (need - 1)) + ", have " +
        std::to_string(rule.nodes.size()));
  }

  const WaveExpansion f = WaveExpansion::basis_state(spec);
  const auto quadratic = [&](Mode axis) {
    return f.mult_xi(axis).mult_xi(axis).minus(f.d_xi(axis).d_xi(axis));
  };
  const WaveExpansion t1 = quadratic(Mode::one);
  const WaveExpansion t2 = quadratic(Mode::two);

  const Complex hw{0.5 * p.hbar * p.omega, 0.0};
  const Complex damping =
      branch_sign(branch) * kI * (0.5 * p.hbar * p.gamma / (2.0 * p.mass));
  const WaveExpansion h_f =
      t1.minus(t2).scaled(hw).plus(t1.plus(t2).scaled(damping));

  const Complex e = eigenvalue_ft({spec.n1, spec.n2}, p, branch);
  const WaveExpansion residual = h_f.minus(f.scaled(e));
  return residual.l2_norm(rule) / f.l2_norm(rule);
}

std::vector<GridPoint> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo))
    throw DomainError("make_grid: need step > 0 and hi >= lo");
  std::vector<double> axis;
  for (double x = lo; x <= hi + 0.5 * step; x += step) axis.push_back(x);
  std::vector<GridPoint> out;
  out.reserve(axis.size() * axis.size());
  for (double x1 : axis)
    for (double x2 : axis) out.push_back({x1, x2});
  return out;
}

double vacuum_pde_residual(const WavefunctionSpec& spec, const PhysParams& p,
                           const std::vector<GridPoint>& grid) {
  if (spec.n1 != 0 || spec.n2 != 0)
    throw DomainError("vacuum_pde_residual: defined for the (0,0) spec only");
  p.validate();
  const WavefunctionSpec vac{0, 0, p};
  const double scale = xi_scale(p);
  double worst = 0.0;
  for (const auto& pt : grid) {
    const PointEval e = eigenfunction_with_gradient(vac, pt[0], pt[1]);
    const double xi1 = scale * pt[0];
    const double xi2 = scale * pt[1];
    worst = std::max(worst, std::abs(xi1 * e.value + e.dxi1));
    worst = std::max(worst, std::abs(xi2 * e.value + e.dxi2));
  }
  return worst;
}

double Mollifier::density(double u) const {
  if (!(sigma > 0.0)) throw DomainError("Mollifier: sigma must be positive");
  const double z = u / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
}

double TestFunction::value(double x1, double x2) const {
  const double q = c00 + c10 * x1 + c01 * x2 + c20 * x1 * x1 + c11 * x1 * x2 +
                   c02 * x2 * x2;
  return q * std::exp(-0.5 * (x1 * x1 + x2 * x2));
}

std::array<double, 2> TestFunction::gradient(double x1, double x2) const {
  const double q = c00 + c10 * x1 + c01 * x2 + c20 * x1 * x1 + c11 * x1 * x2 +
                   c02 * x2 * x2;
  const double qx1 = c10 + 2.0 * c20 * x1 + c11 * x2;
  const double qx2 = c01 + c11 * x1 + 2.0 * c02 * x2;
  const double g = std::exp(-0.5 * (x1 * x1 + x2 * x2));
  return {(qx1 - x1 * q) * g, (qx2 - x2 * q) * g};
}

std::vector<TestFunction> default_test_family() {
  std::vector<TestFunction> family(6);
  family[0].c00 = 1.0;
  family[1].c10 = 1.0;
  family[2].c01 = 1.0;
  family[3].c20 = 1.0;
  family[4].c11 = 1.0;
  family[5].c02 = 1.0;
  return family;
}

WeakResiduals mollified_weak_residual(const Mollifier& moll,
                                      const TestFunction& test,
                                      const QuadratureRule& rule) {
  if (!(moll.sigma > 0.0))
    throw DomainError("mollified_weak_residual: sigma must be positive");
  const double sign = branch_sign(moll.branch);  // u = x1 - sign*x2

  // Rotated frame u = x1 -+ x2, v = x1 +- x2; both Gaussian factors are
  // folded into per-axis scaled Gauss-Hermite weights.
  const double au = 0.25 + 1.0 / (2.0 * moll.sigma * moll.sigma);
  const double av = 0.25;
  const double su = 1.0 / std::sqrt(au);
  const double sv = 1.0 / std::sqrt(av);
  const double amplitude = 1.0 / (moll.sigma * std::sqrt(2.0 * M_PI));

  const auto poly = [&](double x1, double x2) {
    return test.c00 + test.c10 * x1 + test.c01 * x2 + test.c20 * x1 * x1 +
           test.c11 * x1 * x2 + test.c02 * x2 * x2;
  };
  const auto poly_dx1 = [&](double x1, double x2) {
    return test.c10 + 2.0 * test.c20 * x1 + test.c11 * x2;
  };
  const auto poly_dx2 = [&](double x1, double x2) {
    return test.c01 + test.c11 * x1 + 2.0 * test.c02 * x2;
  };

  WeakResiduals out;
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
    const double u = su * rule.nodes(i);
    for (Eigen::Index j = 0; j < rule.nodes.size(); ++j) {
      const double v = sv * rule.nodes(j);
      const double x1 = 0.5 * (u + v);
      const double x2 = sign > 0 ? 0.5 * (v - u) : 0.5 * (u - v);
      const double w = 0.5 * su * sv * rule.weights(i) * rule.weights(j);
      const double q = poly(x1, x2);
      out.w17a += w * amplitude * q * u;
      // by parts: -(d1 +- d2) acting on the test function
      const double dq = poly_dx1(x1, x2) + sign * poly_dx2(x1, x2);
      const double dpsi = dq - (x1 + sign * x2) * q;
      out.w17b -= w * amplitude * dpsi;
    }
  }
  return out;
}

double improper_partial_sum(int n_terms, ThetaOrBranch theta, double x1,
                            double x2) {
  if (n_terms < 1) throw DomainError("improper_partial_sum: need n_terms >= 1");
  if (!theta.is_branch() && !(std::abs(theta.theta()) < M_PI / 2.0)) {
    throw DomainError(
        "improper_partial_sum: coefficients need |theta| < pi/2 or a branch");
  }
  const RealVector b1 = hermite_row(n_terms - 1, x1, true);
  const RealVector b2 = hermite_row(n_terms - 1, x2, true);
  double acc = 0.0;
  for (int n = 0; n < n_terms; ++n)
    acc += closed_form_pair_amplitude(theta, n) * b1(n) * b2(n);
  return acc;
}

}  // namespace bateman
