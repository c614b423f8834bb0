#include "nvmagnon/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "nvmagnon/bath.hpp"
#include "nvmagnon/errors.hpp"
#include "nvmagnon/measures.hpp"

namespace nvmagnon {

using cd = std::complex<double>;

Frame parse_frame(const std::string& name) {
  if (name == "rotating") return Frame::rotating;
  if (name == "lab") return Frame::lab;
  throw ValidationError("frame", "must be 'rotating' or 'lab'");
}

const char* to_string(Frame f) { return f == Frame::lab ? "lab" : "rotating"; }

void MasterEqParams::validate() const {
  auto rate = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError(name, "must be finite and non-negative");
  };
  rate(kappa, "kappa");
  rate(nbar0, "nbar0");
  rate(epsilon, "epsilon");
  rate(kappa_nv, "kappa_NV");
  rate(kappa_deph, "kappa_NV_deph");
  if (!std::isfinite(eta0)) throw ValidationError("eta0", "must be finite");
  if (!std::isfinite(omega)) throw ValidationError("Omega", "must be finite");
}

namespace {

Eigen::Matrix2cd single(int which) {
  // index 0 is |1> = |+>, index 1 is |0> = |->
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  switch (which) {
    case 0:  // sigma+
      m(0, 1) = 1.0;
      break;
    case 1:  // sigma-
      m(1, 0) = 1.0;
      break;
    case 2:  // sigma z
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    default:  // sigma y = -i (sigma+ - sigma-)
      m(0, 1) = cd(0.0, -1.0);
      m(1, 0) = cd(0.0, 1.0);
  }
  return m;
}

Matrix4c embed(const Eigen::Matrix2cd& op, int qubit) {
  if (qubit != 0 && qubit != 1) throw std::out_of_range("qubit index must be 0 or 1");
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd& a = qubit == 0 ? op : id;
  const Eigen::Matrix2cd& b = qubit == 0 ? id : op;
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Matrix16c kron(const Matrix4c& a, const Matrix4c& b) {
  Matrix16c out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
  return out;
}

Matrix16c left(const Matrix4c& a) { return kron(Matrix4c::Identity(), a); }
Matrix16c right(const Matrix4c& b) { return kron(b.transpose(), Matrix4c::Identity()); }

Matrix16c commutator(const Matrix4c& h) { return cd(0.0, -1.0) * (left(h) - right(h)); }

}  // namespace

Matrix4c sigma_plus(int q) { return embed(single(0), q); }
Matrix4c sigma_minus(int q) { return embed(single(1), q); }
Matrix4c sigma_z(int q) { return embed(single(2), q); }
Matrix4c sigma_y(int q) { return embed(single(3), q); }

Vector16c vectorize(const Matrix4c& rho) { return Eigen::Map<const Vector16c>(rho.data()); }

Matrix4c unvectorize(const Vector16c& v) { return Eigen::Map<const Matrix4c>(v.data()); }

Matrix16c dissipator(const Matrix4c& a, const Matrix4c& b) {
  const Matrix4c ba = b * a;
  return 2.0 * kron(b.transpose(), a) - left(ba) - right(ba);
}

Liouvillian build_liouvillian(const MasterEqParams& p) {
  p.validate();
  Liouvillian l;
  l.params = p;
  Matrix16c& m = l.matrix;

  Matrix4c h = -p.eta0 * p.epsilon * (sigma_y(0) + sigma_y(1));
  if (p.frame == Frame::lab) h += 0.5 * p.omega * (sigma_z(0) + sigma_z(1));
  if (!h.isZero(0.0)) m += commutator(h);

  const Matrix4c sp = sigma_plus(0) + sigma_plus(1);
  const Matrix4c sm = sigma_minus(0) + sigma_minus(1);
  const auto pre = collective_prefactors(p.kappa, p.nbar0, p.epsilon);
  if (pre.squeezing != 0.0) m -= pre.squeezing * (dissipator(sp, sp) + dissipator(sm, sm));
  if (pre.emission != 0.0) m += pre.emission * dissipator(sm, sp);
  if (pre.absorption != 0.0) m += pre.absorption * dissipator(sp, sm);

  for (int q = 0; q < 2; ++q) {
    if (p.kappa_nv != 0.0) {
      m += 0.5 * p.kappa_nv * (p.nbar0 + 1.0) * dissipator(sigma_minus(q), sigma_plus(q));
      if (p.nbar0 != 0.0) m += 0.5 * p.kappa_nv * p.nbar0 * dissipator(sigma_plus(q), sigma_minus(q));
    }
    if (p.kappa_deph != 0.0) {
      const Matrix4c z = sigma_z(q);
      m += 0.5 * p.kappa_deph * (kron(z.transpose(), z) - Matrix16c::Identity());
    }
  }
  return l;
}

double trace_preservation_error(const Liouvillian& l) {
  const double norm = l.matrix.norm();
  if (norm == 0.0) return 0.0;
  const Vector16c id = vectorize(Matrix4c::Identity());
  return (l.matrix.adjoint() * id).norm() / norm;
}

Eigen::Matrix<cd, 16, 1> spectrum(const Liouvillian& l) {
  Eigen::ComplexEigenSolver<Matrix16c> es(l.matrix, false);
  return es.eigenvalues();
}

namespace {

TwoQubitState clean(const Vector16c& v, Trajectory& traj, double positivity_limit, double t) {
  Matrix4c rho = unvectorize(v);
  traj.max_hermiticity_drift = std::max(traj.max_hermiticity_drift, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
  rho = 0.5 * (rho + rho.adjoint());
  const cd tr = rho.trace();
  traj.max_trace_drift = std::max(traj.max_trace_drift, std::abs(tr - 1.0));
  if (!(std::abs(tr) > 0.0) || !rho.allFinite()) throw PhysicsError("propagated state lost its trace");
  rho /= tr.real();
  TwoQubitState s(rho);
  const double lmin = s.min_eigenvalue();
  if (lmin < -positivity_limit)
    throw PhysicsError("state left the positive cone at t = " + std::to_string(t) +
                       " s (min eigenvalue " + std::to_string(lmin) + ")");
  return s;
}

}  // namespace

Trajectory evolve(const TwoQubitState& rho0, const Liouvillian& l, const std::vector<double>& times,
                  const EvolveOptions& options) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || !std::isfinite(times[i])) throw ValidationError("times", "must be finite and >= 0");
    if (i > 0 && !(times[i] > times[i - 1])) throw ValidationError("times", "must be strictly increasing");
  }
  Trajectory traj;
  traj.times = times;
  traj.states.reserve(times.size());
  const Vector16c v0 = vectorize(rho0.matrix());

  Eigen::ComplexEigenSolver<Matrix16c> es;
  bool spectral = !options.force_fallback;
  Vector16c coeff;
  if (spectral) {
    es.compute(l.matrix, true);
    spectral = es.info() == Eigen::Success;
    if (spectral) {
      Eigen::JacobiSVD<Matrix16c> svd(es.eigenvectors());
      const auto& sv = svd.singularValues();
      const double cond = sv(15) > 0.0 ? sv(0) / sv(15) : std::numeric_limits<double>::infinity();
      spectral = cond <= options.fallback_condition;
    }
    if (spectral) coeff = es.eigenvectors().partialPivLu().solve(v0);
  }
  traj.used_fallback = !spectral;

  for (double t : times) {
    if (t == 0.0) {
      traj.states.push_back(rho0);
      continue;
    }
    Vector16c v;
    if (spectral) {
      Vector16c w;
      for (int i = 0; i < 16; ++i) w(i) = std::exp(es.eigenvalues()(i) * t) * coeff(i);
      v = es.eigenvectors() * w;
    } else {
      const Matrix16c lt = l.matrix * t;
      v = lt.exp() * v0;
    }
    traj.states.push_back(clean(v, traj, options.positivity_limit, t));
  }
  annotate(traj);
  return traj;
}

SteadyState steady_state(const Liouvillian& l, const std::optional<TwoQubitState>& rho0,
                         const SteadyStateOptions& options) {
  const double norm = l.matrix.norm();
  SteadyState out;
  if (norm == 0.0) {
    if (!rho0) throw PhysicsError("steady state is not unique (kernel dimension 16); an initial state is required");
    out.state = *rho0;
    out.kernel_dimension = 16;
    return out;
  }

  const auto ev = spectrum(l);
  const double tol = options.kernel_tolerance * norm;
  std::vector<int> order(16);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return std::abs(ev(a)) < std::abs(ev(b)); });
  int dim = 0;
  for (int i : order)
    if (std::abs(ev(i)) < tol) ++dim;
  if (dim == 0) throw PhysicsError("generator has no stationary state within tolerance");
  out.kernel_dimension = dim;
  out.slowest_rate = std::numeric_limits<double>::infinity();
  for (int n = dim; n < 16; ++n) out.slowest_rate = std::min(out.slowest_rate, std::abs(ev(order[n]).real()));

  Eigen::JacobiSVD<Matrix16c> svd(l.matrix, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Matrix<cd, 16, Eigen::Dynamic> r = svd.matrixV().rightCols(dim);
  Vector16c v;
  if (dim == 1) {
    v = r.col(0);
  } else {
    if (!rho0)
      throw PhysicsError("steady state is not unique (kernel dimension " + std::to_string(dim) +
                         "); an initial state is required");
    const Eigen::Matrix<cd, 16, Eigen::Dynamic> w = svd.matrixU().rightCols(dim);
    const Eigen::MatrixXcd overlap = w.adjoint() * r;
    v = r * overlap.partialPivLu().solve(w.adjoint() * vectorize(rho0->matrix()));
  }
  Matrix4c rho = unvectorize(v);
  rho = 0.5 * (rho + rho.adjoint());
  const cd tr = rho.trace();
  if (!(std::abs(tr) > 1e-14 * rho.norm())) throw PhysicsError("kernel vector is traceless");
  rho /= tr.real();
  out.state = TwoQubitState(rho);
  return out;
}

GridKind parse_grid(const std::string& name) {
  if (name == "linear") return GridKind::linear;
  if (name == "log") return GridKind::log;
  throw ValidationError("time.grid", "must be 'linear' or 'log'");
}

std::vector<double> time_grid(double t_max, int samples, GridKind kind, double t_min) {
  if (!(t_max > 0.0)) throw ValidationError("time.t_max", "must be positive");
  if (samples < 2) throw ValidationError("time.samples", "must be at least 2");
  std::vector<double> t(samples);
  if (kind == GridKind::linear) {
    for (int i = 0; i < samples; ++i) t[i] = t_max * i / (samples - 1);
    return t;
  }
  if (!(t_min > 0.0) || !(t_min < t_max)) throw ValidationError("time.t_min", "log grid needs 0 < t_min < t_max");
  t[0] = 0.0;
  const double a = std::log(t_min), b = std::log(t_max);
  for (int i = 1; i < samples; ++i) t[i] = std::exp(a + (b - a) * (i - 1) / (samples - 2 > 0 ? samples - 2 : 1));
  t.back() = t_max;
  return t;
}

}  // namespace nvmagnon
