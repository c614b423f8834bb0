#include "nvmagnon/measures.hpp"

#include <algorithm>
#include <cmath>

#include "nvmagnon/errors.hpp"

namespace nvmagnon {

namespace {

Matrix4c sigma_yy() {
  // sigma_y (x) sigma_y is real in this basis: antidiagonal (-1, 1, 1, -1)
  Matrix4c m = Matrix4c::Zero();
  m(0, 3) = -1.0;
  m(1, 2) = 1.0;
  m(2, 1) = 1.0;
  m(3, 0) = -1.0;
  return m;
}

}  // namespace

double concurrence(const Matrix4c& rho_in) {
  const Matrix4c rho = 0.5 * (rho_in + rho_in.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho);
  const Eigen::Vector4d w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix4c sq = es.eigenvectors() * w.cast<std::complex<double>>().asDiagonal() *
                      es.eigenvectors().adjoint();
  const Matrix4c yy = sigma_yy();
  const Matrix4c tilde = yy * rho.conjugate() * yy;
  Matrix4c r = sq * tilde * sq;
  r = 0.5 * (r + r.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> er(r, Eigen::EigenvaluesOnly);
  Eigen::Vector4d l = er.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  std::sort(l.data(), l.data() + 4, std::greater<>());
  return std::clamp(l(0) - l(1) - l(2) - l(3), 0.0, 1.0);
}

double l1_coherence(const Matrix4c& rho) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) s += std::abs(rho(i, j));
  return s;
}

std::pair<double, double> dfs_fidelities(const Matrix4c& rho) {
  const Vector4c a = dfs1_vector(), b = dfs2_vector();
  return {(a.adjoint() * rho * a)(0, 0).real(), (b.adjoint() * rho * b)(0, 0).real()};
}

void annotate(Trajectory& traj) {
  const std::size_t n = traj.states.size();
  traj.concurrence.resize(n);
  traj.coherence.resize(n);
  traj.fidelity_dfs1.resize(n);
  traj.fidelity_dfs2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Matrix4c& rho = traj.states[i].matrix();
    traj.concurrence[i] = concurrence(rho);
    traj.coherence[i] = l1_coherence(rho);
    const auto f = dfs_fidelities(rho);
    traj.fidelity_dfs1[i] = f.first;
    traj.fidelity_dfs2[i] = f.second;
  }
}

EsdReport detect_esd(const std::vector<double>& times, const std::vector<double>& c,
                     const std::vector<double>& c1, const EsdOptions& options) {
  if (times.size() != c.size() || c1.size() != c.size())
    throw std::invalid_argument("detect_esd: series lengths differ");
  EsdReport rep;
  if (c.empty()) return rep;
  const double lo = options.floor, hi = 2.0 * options.floor;

  bool armed = false;  // exceeded 2 floor since the last death
  bool dead = false;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (rep.death_times.empty()) rep.transient_peak = std::max(rep.transient_peak, c[i]);
    if (dead) {
      if (c[i] > hi) {
        rep.revival_times.push_back(times[i]);
        dead = false;
        armed = true;
      }
    } else if (c[i] > hi) {
      armed = true;
    } else if (armed && c[i] < lo) {
      rep.death_times.push_back(times[i]);
      dead = true;
      armed = false;
    }
  }

  const auto tail = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(options.tail_fraction * c.size())));
  const std::size_t start = c.size() - tail;
  const auto [cmin, cmax] = std::minmax_element(c.begin() + start, c.end());
  const auto [dmin, dmax] = std::minmax_element(c1.begin() + start, c1.end());
  rep.steady_spread = std::max(*cmax - *cmin, *dmax - *dmin);
  rep.steady = rep.steady_spread <= options.steady_spread;
  rep.c_ss = c.back();
  rep.c1_ss = c1.back();
  if (!rep.steady && options.require_steady)
    throw PhysicsError("not steady: final samples spread by " + std::to_string(rep.steady_spread));
  return rep;
}

EsdReport detect_esd(const Trajectory& traj, const EsdOptions& options) {
  return detect_esd(traj.times, traj.concurrence, traj.coherence, options);
}

}  // namespace nvmagnon
