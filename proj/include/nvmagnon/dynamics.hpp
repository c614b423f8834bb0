#pragma once

// Secular master equation for two NV qubits sharing the displaced magnon
// bath, with optional private relaxation and dephasing, in vectorised form.
//
// Vectorisation is column stacking: vec(A X B) = (B^T (x) A) vec(X).

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "nvmagnon/state.hpp"

namespace nvmagnon {

using Matrix16c = Eigen::Matrix<std::complex<double>, 16, 16>;
using Vector16c = Eigen::Matrix<std::complex<double>, 16, 1>;

enum class Frame { rotating, lab };

Frame parse_frame(const std::string& name);
const char* to_string(Frame f);

struct MasterEqParams {
  double kappa = 0.0;       ///< collective rate D0 eta0^2 (1/s)
  double nbar0 = 0.0;
  double epsilon = 0.0;
  double eta0 = 0.0;        ///< rad/s
  double omega = 0.0;       ///< common dressed frequency, used in the lab frame (rad/s)
  double kappa_nv = 0.0;    ///< 1/T1
  double kappa_deph = 0.0;  ///< 1/T2
  Frame frame = Frame::rotating;

  void validate() const;
};

struct Liouvillian {
  Matrix16c matrix = Matrix16c::Zero();
  MasterEqParams params;
};

Liouvillian build_liouvillian(const MasterEqParams& p);

Vector16c vectorize(const Matrix4c& rho);
Matrix4c unvectorize(const Vector16c& v);

/// Superoperator of D(A, B) rho = 2 A rho B - {B A, rho}.
Matrix16c dissipator(const Matrix4c& a, const Matrix4c& b);

/// Single-qubit operators embedded on qubit 0 or 1.
Matrix4c sigma_plus(int qubit);
Matrix4c sigma_minus(int qubit);
Matrix4c sigma_z(int qubit);
Matrix4c sigma_y(int qubit);

/// ||L^dag vec(I)|| / ||L||, zero for a trace-preserving generator.
double trace_preservation_error(const Liouvillian& l);

Eigen::Matrix<std::complex<double>, 16, 1> spectrum(const Liouvillian& l);

struct EvolveOptions {
  double fallback_condition = 1e12;
  double positivity_limit = 1e-6;
  bool force_fallback = false;
};

/// rho(t) = exp(L t) rho0 at every requested time (times must be
/// non-negative and strictly increasing).
Trajectory evolve(const TwoQubitState& rho0, const Liouvillian& l, const std::vector<double>& times,
                  const EvolveOptions& options = {});

struct SteadyStateOptions {
  double kernel_tolerance = 1e-12;  ///< relative to the Frobenius norm of L
};

struct SteadyState {
  TwoQubitState state;
  int kernel_dimension = 0;
  double slowest_rate = 0.0;  ///< smallest |Re lambda| outside the kernel (1/s)
};

/// Fixed point of L. A degenerate kernel needs rho0 and returns the
/// long-time limit of exp(L t) rho0 via the spectral projector.
SteadyState steady_state(const Liouvillian& l, const std::optional<TwoQubitState>& rho0 = std::nullopt,
                         const SteadyStateOptions& options = {});

enum class GridKind { linear, log };

GridKind parse_grid(const std::string& name);

/// Linear grid 0..t_max, or 0 followed by a log-spaced grid t_min..t_max.
std::vector<double> time_grid(double t_max, int samples, GridKind kind, double t_min = 0.0);

}  // namespace nvmagnon
