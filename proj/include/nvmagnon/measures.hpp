#pragma once

#include <utility>
#include <vector>

#include "nvmagnon/state.hpp"

namespace nvmagnon {

/// Wootters concurrence in [0, 1]. Uses the eigenvalues of the Hermitian
/// sqrt(rho) rho~ sqrt(rho), which equal those of rho rho~.
double concurrence(const Matrix4c& rho);
inline double concurrence(const TwoQubitState& s) { return concurrence(s.matrix()); }

/// Sum of |rho_ij| over i != j.
double l1_coherence(const Matrix4c& rho);
inline double l1_coherence(const TwoQubitState& s) { return l1_coherence(s.matrix()); }

/// (<DFS1|rho|DFS1>, <DFS2|rho|DFS2>).
std::pair<double, double> dfs_fidelities(const Matrix4c& rho);
inline std::pair<double, double> dfs_fidelities(const TwoQubitState& s) { return dfs_fidelities(s.matrix()); }

/// Fills the derived series of a trajectory from its states.
void annotate(Trajectory& traj);

struct EsdOptions {
  double floor = 1e-4;
  double tail_fraction = 0.1;
  double steady_spread = 1e-6;
  bool require_steady = true;
};

struct EsdReport {
  std::vector<double> death_times;
  std::vector<double> revival_times;
  double transient_peak = 0.0;  ///< max C before the first death
  double c_ss = 0.0;
  double c1_ss = 0.0;
  bool steady = false;
  double steady_spread = 0.0;
};

/// Death: C falls below floor after having exceeded 2 floor. Revival: C
/// exceeds 2 floor again after a death. Throws PhysicsError ("not steady")
/// when the tail spread is too large and require_steady is set.
EsdReport detect_esd(const std::vector<double>& times, const std::vector<double>& c,
                     const std::vector<double>& c1, const EsdOptions& options = {});
EsdReport detect_esd(const Trajectory& traj, const EsdOptions& options = {});

}  // namespace nvmagnon
