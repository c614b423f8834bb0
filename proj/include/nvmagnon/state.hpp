#pragma once

// Two-qubit density matrices in the basis {|11>, |10>, |01>, |00>} with
// |1> = |+> (excited) and |0> = |->.

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace nvmagnon {

using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;

struct StateTolerance {
  double hermiticity = 1e-10;
  double trace = 1e-9;
  double positivity = 1e-8;
};

class TwoQubitState {
 public:
  TwoQubitState();  // |00><00|
  explicit TwoQubitState(const Matrix4c& rho);

  static TwoQubitState pure(const Vector4c& psi);
  static TwoQubitState plus_minus();  // |+->
  static TwoQubitState dfs1();        // (|+-> - |-+>)/sqrt2
  static TwoQubitState dfs2();        // (|++> - |-->)/sqrt2
  static TwoQubitState bell_plus();   // (|++> + |-->)/sqrt2
  static TwoQubitState maximally_mixed();

  /// Named states used by the configuration layer.
  static TwoQubitState named(const std::string& name);

  [[nodiscard]] const Matrix4c& matrix() const { return rho_; }
  [[nodiscard]] std::complex<double> operator()(int i, int j) const { return rho_(i, j); }

  [[nodiscard]] double hermiticity_error() const;
  [[nodiscard]] double trace_error() const;
  [[nodiscard]] double min_eigenvalue() const;

  /// Throws PhysicsError naming the first violated invariant.
  void validate(const StateTolerance& tol = {}) const;
  [[nodiscard]] bool is_valid(const StateTolerance& tol = {}) const;

 private:
  Matrix4c rho_;
};

Vector4c dfs1_vector();
Vector4c dfs2_vector();

/// 0.5 * trace norm of the difference.
double trace_distance(const Matrix4c& a, const Matrix4c& b);

struct Trajectory {
  std::vector<double> times;
  std::vector<TwoQubitState> states;
  std::vector<double> concurrence;
  std::vector<double> coherence;  ///< l1 norm
  std::vector<double> fidelity_dfs1;
  std::vector<double> fidelity_dfs2;
  double max_trace_drift = 0.0;        ///< largest |tr - 1| before renormalisation
  double max_hermiticity_drift = 0.0;  ///< largest ||rho - rho^dag|| before symmetrisation
  bool used_fallback = false;          ///< propagated with the matrix-exponential fallback
};

}  // namespace nvmagnon
