#include "nvmagnon/state.hpp"

#include <cmath>

#include "nvmagnon/errors.hpp"

namespace nvmagnon {

namespace {
constexpr int pp = 0, pm = 1, mp = 2, mm = 3;
const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
}  // namespace

TwoQubitState::TwoQubitState() : rho_(Matrix4c::Zero()) { rho_(mm, mm) = 1.0; }

TwoQubitState::TwoQubitState(const Matrix4c& rho) : rho_(rho) {}

TwoQubitState TwoQubitState::pure(const Vector4c& psi) {
  const Vector4c v = psi / psi.norm();
  return TwoQubitState(v * v.adjoint());
}

TwoQubitState TwoQubitState::plus_minus() {
  Vector4c v = Vector4c::Zero();
  v(pm) = 1.0;
  return pure(v);
}

Vector4c dfs1_vector() {
  Vector4c v = Vector4c::Zero();
  v(pm) = inv_sqrt2;
  v(mp) = -inv_sqrt2;
  return v;
}

Vector4c dfs2_vector() {
  Vector4c v = Vector4c::Zero();
  v(pp) = inv_sqrt2;
  v(mm) = -inv_sqrt2;
  return v;
}

TwoQubitState TwoQubitState::dfs1() { return pure(dfs1_vector()); }
TwoQubitState TwoQubitState::dfs2() { return pure(dfs2_vector()); }

TwoQubitState TwoQubitState::bell_plus() {
  Vector4c v = Vector4c::Zero();
  v(pp) = inv_sqrt2;
  v(mm) = inv_sqrt2;
  return pure(v);
}

TwoQubitState TwoQubitState::maximally_mixed() { return TwoQubitState(Matrix4c::Identity() / 4.0); }

TwoQubitState TwoQubitState::named(const std::string& name) {
  if (name == "plus-minus") return plus_minus();
  if (name == "dfs1" || name == "singlet") return dfs1();
  if (name == "dfs2") return dfs2();
  if (name == "bell-plus") return bell_plus();
  if (name == "mixed") return maximally_mixed();
  if (name == "ground") return TwoQubitState();
  throw ValidationError("initial_state", "unknown state '" + name + "'");
}

double TwoQubitState::hermiticity_error() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }

double TwoQubitState::trace_error() const { return std::abs(rho_.trace() - 1.0); }

double TwoQubitState::min_eigenvalue() const {
  const Matrix4c h = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void TwoQubitState::validate(const StateTolerance& tol) const {
  if (!rho_.allFinite()) throw PhysicsError("density matrix has non-finite entries");
  if (hermiticity_error() > tol.hermiticity) throw PhysicsError("density matrix is not Hermitian");
  if (trace_error() > tol.trace) throw PhysicsError("density matrix trace differs from 1");
  if (min_eigenvalue() < -tol.positivity) throw PhysicsError("density matrix has a negative eigenvalue");
}

bool TwoQubitState::is_valid(const StateTolerance& tol) const {
  try {
    validate(tol);
    return true;
  } catch (const PhysicsError&) {
    return false;
  }
}

double trace_distance(const Matrix4c& a, const Matrix4c& b) {
  const Matrix4c d = a - b;
  const Matrix4c h = 0.5 * (d + d.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(h, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace nvmagnon
