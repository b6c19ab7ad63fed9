#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>

#include "ppgd/core/element.hpp"

namespace ppgd::core {

template <>
struct element_traits<Eigen::VectorXd> {
  static double sup_norm(const Eigen::VectorXd& v) {
    return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0;
  }
  static double pairing(const Eigen::VectorXd& phi, const Eigen::VectorXd& v) {
    return phi.dot(v);
  }
};

}  // namespace ppgd::core

namespace ppgd::theory {

/// Desk-scale realization of the abstract setting: objective
///   G(v) = 1/2 v'Av - b'v + (beta/4) sum v_i^4
/// with an SPD preconditioner matrix L. Everything is small enough to be
/// cross-checked by brute force.
struct DenseInstance {
  Eigen::MatrixXd A;
  Eigen::MatrixXd L;
  Eigen::VectorXd b;
  double quartic_beta = 0.0;

  DenseInstance(Eigen::MatrixXd A_, Eigen::MatrixXd L_, Eigen::VectorXd b_, double beta)
      : A(std::move(A_)), L(std::move(L_)), b(std::move(b_)), quartic_beta(beta) {
    if (A.rows() != A.cols() || L.rows() != L.cols() || A.rows() != L.rows() ||
        b.size() != A.rows())
      throw std::invalid_argument("DenseInstance: inconsistent dimensions");
    if (A.rows() < 1 || A.rows() > 64)
      throw std::invalid_argument("DenseInstance: dimension must be in [1, 64]");
    if (quartic_beta < 0.0)
      throw std::invalid_argument("DenseInstance: quartic weight must be nonnegative");
    require_spd(A, "A");
    require_spd(L, "L");
  }

  int dim() const { return static_cast<int>(A.rows()); }

  /// Strong convexity constant with respect to the L-norm: the smallest
  /// generalized eigenvalue of (A, L). The quartic term only adds
  /// convexity, so this is a valid lower bound for any beta >= 0.
  double mu() const {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, L);
    return es.eigenvalues().minCoeff();
  }

  /// Largest generalized eigenvalue of (A, L): the Lipschitz constant of
  /// the quadratic part in the L-geometry.
  double quadratic_lipschitz() const {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, L);
    return es.eigenvalues().maxCoeff();
  }

  /// Seeded random instance with the strong convexity constant rescaled to
  /// mu_target exactly.
  static DenseInstance random(int n, double beta, std::uint64_t seed, double mu_target,
                              bool preconditioner_equals_quadratic = false) {
    std::mt19937_64 rng(seed);
    Eigen::MatrixXd L = random_spd(n, 0.5, 2.0, rng);
    Eigen::MatrixXd A =
        preconditioner_equals_quadratic ? L : random_spd(n, 1.0, 5.0, rng);
    Eigen::VectorXd b(n);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int i = 0; i < n; ++i) b[i] = normal(rng);
    DenseInstance inst(std::move(A), std::move(L), std::move(b), beta);
    const double mu0 = inst.mu();
    inst.A *= mu_target / mu0;
    return inst;
  }

 private:
  static void require_spd(const Eigen::MatrixXd& m, const char* name) {
    if (!m.isApprox(m.transpose(), 1e-12))
      throw std::invalid_argument(std::string("DenseInstance: ") + name +
                                  " must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.eigenvalues().minCoeff() <= 0.0)
      throw std::invalid_argument(std::string("DenseInstance: ") + name +
                                  " must be positive definite");
  }

  static Eigen::MatrixXd random_spd(int n, double lo, double hi, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd R(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) R(i, j) = normal(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(R);
    Eigen::MatrixXd Q = qr.householderQ();
    std::uniform_real_distribution<double> unif(lo, hi);
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d[i] = unif(rng);
    return Q * d.asDiagonal() * Q.transpose();
  }
};

/// Dense preconditioner: inner products and Riesz maps through L.
class DensePreconditioner {
 public:
  explicit DensePreconditioner(const Eigen::MatrixXd& L) : L_(&L), llt_(L) {
    if (llt_.info() != Eigen::Success)
      throw std::invalid_argument("DensePreconditioner: factorization failed");
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const { return (*L_) * v; }
  Eigen::VectorXd apply_inverse(const Eigen::VectorXd& phi) const { return llt_.solve(phi); }
  double inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
    return u.dot((*L_) * v);
  }
  double inner_dual(const Eigen::VectorXd& phi, const Eigen::VectorXd& psi) const {
    return phi.dot(llt_.solve(psi));
  }
  double norm(const Eigen::VectorXd& v) const { return std::sqrt(inner(v, v)); }
  double dual_norm(const Eigen::VectorXd& phi) const {
    return std::sqrt(inner_dual(phi, phi));
  }

 private:
  const Eigen::MatrixXd* L_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

/// Composite-objective adapter over a dense instance. The whole gradient
/// sits in F (E = 0); the approximation adds an injected perturbation,
/// which is how the convergence theory is stressed without a PDE around.
class DenseObjective {
 public:
  using theta_type = long;
  using Injector = std::function<Eigen::VectorXd(long, const Eigen::VectorXd&)>;

  explicit DenseObjective(const DenseInstance& inst, Injector injector = {})
      : inst_(&inst), injector_(std::move(injector)) {}

  double energy(const Eigen::VectorXd& v) const {
    const double quad = 0.5 * v.dot(inst_->A * v) - inst_->b.dot(v);
    return quad + 0.25 * inst_->quartic_beta * v.array().pow(4).sum();
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& v) const {
    Eigen::VectorXd g = inst_->A * v - inst_->b;
    if (inst_->quartic_beta != 0.0)
      g += inst_->quartic_beta * v.array().cube().matrix();
    return g;
  }

  Eigen::MatrixXd hessian(const Eigen::VectorXd& v) const {
    Eigen::MatrixXd h = inst_->A;
    if (inst_->quartic_beta != 0.0)
      h += (3.0 * inst_->quartic_beta * v.array().square()).matrix().asDiagonal();
    return h;
  }

  Eigen::VectorXd grad_e(const Eigen::VectorXd& v) const {
    return Eigen::VectorXd::Zero(v.size());
  }
  Eigen::VectorXd grad_f(const Eigen::VectorXd& v) const { return gradient(v); }

  Eigen::VectorXd approx_grad_f(const Eigen::VectorXd& v, long k) {
    Eigen::VectorXd g = gradient(v);
    if (injector_) g += injector_(k, v);
    return g;
  }

  /// Quadratic form for exact line search; only the beta = 0 case is an
  /// actual quadratic.
  double curvature(const Eigen::VectorXd& d) const {
    if (inst_->quartic_beta != 0.0)
      throw std::logic_error("DenseObjective: exact line search needs beta = 0");
    return d.dot(inst_->A * d);
  }

  const DenseInstance& instance() const { return *inst_; }

 private:
  const DenseInstance* inst_;
  Injector injector_;
};

/// Oracle minimizer: damped Newton with the exact Hessian, run to a dual
/// gradient norm below tol. Strong convexity makes this globally safe.
inline Eigen::VectorXd newton_minimize(const DenseInstance& inst, double tol = 1e-12,
                                       int max_iters = 200) {
  DenseObjective obj(inst);
  DensePreconditioner pre(inst.L);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(inst.dim());
  for (int it = 0; it < max_iters; ++it) {
    Eigen::VectorXd g = obj.gradient(v);
    const double gnorm = pre.dual_norm(g);
    if (gnorm <= tol) return v;
    Eigen::VectorXd d = obj.hessian(v).llt().solve(-g);
    double t = 1.0;
    // Backtrack only while far out; near the solution energy differences
    // sink below rounding and full Newton steps are safe anyway.
    if (gnorm > 1e-6) {
      const double e0 = obj.energy(v);
      const double slope = g.dot(d);
      while (t > 1e-12 && obj.energy(v + t * d) > e0 + 0.25 * t * slope) t *= 0.5;
    }
    v += t * d;
  }
  throw std::runtime_error("newton_minimize: did not reach tolerance");
}

}  // namespace ppgd::theory
