#include <doctest.h>

#include <cmath>
#include <random>

#include "nvmagnon/dynamics.hpp"
#include "nvmagnon/errors.hpp"
#include "nvmagnon/measures.hpp"

using namespace nvmagnon;
using doctest::Approx;

namespace {

MasterEqParams public_bath(double epsilon) {
  MasterEqParams p;
  p.kappa = 49.0;
  p.nbar0 = 1.3e-30;
  p.epsilon = epsilon;
  p.eta0 = -5.5e4;
  return p;
}

MasterEqParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MasterEqParams p;
  p.kappa = 1.0 + 99.0 * u(rng);
  p.nbar0 = 0.5 * u(rng);
  p.epsilon = 0.7 * u(rng);
  p.eta0 = 200.0 * (u(rng) - 0.5);
  p.kappa_nv = u(rng) < 0.3 ? 0.0 : 50.0 * u(rng);
  p.kappa_deph = u(rng) < 0.3 ? 0.0 : 50.0 * u(rng);
  return p;
}

TwoQubitState random_state(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix4c a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = {g(rng), g(rng)};
  Matrix4c rho = a * a.adjoint();
  return TwoQubitState(rho / rho.trace());
}

double max_off_x(const Matrix4c& r) {
  double m = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const bool x = i == j || i + j == 3;
      if (!x) m = std::max(m, std::abs(r(i, j)));
    }
  return m;
}

int vec_index(int i, int j) { return i + 4 * j; }

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("empty generator") {
    const auto l = build_liouvillian(MasterEqParams{});
    CHECK(l.matrix.norm() == 0.0);
    const auto traj = evolve(TwoQubitState::plus_minus(), l, {0.0, 1.0, 10.0});
    for (const auto& s : traj.states) CHECK((s.matrix() - TwoQubitState::plus_minus().matrix()).norm() < 1e-15);
  }

  TEST_CASE("vectorisation round trip and convention") {
    Matrix4c r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r(i, j) = {double(i), double(j)};
    const auto v = vectorize(r);
    CHECK(v(vec_index(2, 1)) == r(2, 1));
    CHECK((unvectorize(v) - r).norm() == 0.0);
  }

  TEST_CASE("single-qubit amplitude damping") {
    MasterEqParams p;
    p.kappa_nv = 1e3;
    const auto l = build_liouvillian(p);
    const auto times = time_grid(5e-3, 51, GridKind::linear);
    const auto traj = evolve(TwoQubitState::plus_minus(), l, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      CHECK(traj.states[i](1, 1).real() == Approx(std::exp(-1e3 * times[i])).epsilon(1e-10));
      CHECK(traj.states[i](3, 3).real() == Approx(1.0 - std::exp(-1e3 * times[i])).epsilon(1e-10));
    }
  }

  TEST_CASE("trace preservation and dissipativity on random draws") {
    std::mt19937_64 rng(20240611);
    for (int n = 0; n < 100; ++n) {
      auto p = random_params(rng);
      if (n % 4 == 0) {
        p.frame = Frame::lab;
        p.omega = 1e3;
      }
      const auto l = build_liouvillian(p);
      const double norm = l.matrix.norm();
      CHECK(trace_preservation_error(l) < 1e-9);
      const auto ev = spectrum(l);
      for (int i = 0; i < 16; ++i) CHECK(ev(i).real() <= 1e-9 * norm);
    }
  }

  TEST_CASE("evolution starts at the initial state and stays physical") {
    std::mt19937_64 rng(7);
    for (int n = 0; n < 20; ++n) {
      const auto p = random_params(rng);
      const auto rho0 = random_state(rng);
      const auto traj = evolve(rho0, build_liouvillian(p), time_grid(1.0, 40, GridKind::log, 1e-4));
      CHECK((traj.states.front().matrix() - rho0.matrix()).norm() < 1e-14);
      for (const auto& s : traj.states) {
        CHECK(s.hermiticity_error() < 1e-10);
        CHECK(s.trace_error() < 1e-9);
        CHECK(s.min_eigenvalue() >= -1e-8);
      }
    }
  }

  TEST_CASE("ground state of a zero-temperature private channel") {
    MasterEqParams p;
    p.kappa_nv = 10.0;
    const auto ss = steady_state(build_liouvillian(p));
    CHECK(ss.kernel_dimension == 1);
    CHECK(std::abs(ss.state(3, 3) - 1.0) < 1e-12);
    CHECK(ss.slowest_rate == Approx(5.0));  // coherences decay at kappa_nv / 2
  }

  TEST_CASE("degenerate kernel needs an initial state") {
    const auto l = build_liouvillian(public_bath(0.0));
    CHECK_THROWS_AS(steady_state(l), PhysicsError);
  }

  TEST_CASE("public bath from |+->") {
    const auto l = build_liouvillian(public_bath(0.0));
    const auto ss = steady_state(l, TwoQubitState::plus_minus());
    CHECK(ss.kernel_dimension > 1);
    const auto& r = ss.state.matrix();
    CHECK(std::abs(r(0, 0)) < 1e-9);
    CHECK(r(3, 3).real() == Approx(0.5).epsilon(1e-9));
    CHECK(r(1, 1).real() == Approx(0.25).epsilon(1e-9));
    CHECK(r(2, 2).real() == Approx(0.25).epsilon(1e-9));
    CHECK(r(1, 2).real() == Approx(-0.25).epsilon(1e-9));
    CHECK(concurrence(r) == Approx(0.5).epsilon(1e-9));
    CHECK(dfs_fidelities(r).first == Approx(0.5).epsilon(1e-9));

    const auto traj = evolve(TwoQubitState::plus_minus(), l, time_grid(2.0, 200, GridKind::log, 1e-5));
    for (const auto& s : traj.states) {
      const auto& m = s.matrix();
      for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {0, 3}, {1, 3}, {2, 3}}) CHECK(std::abs(m(i, j)) < 1e-10);
      CHECK(std::abs(m(1, 2).imag()) < 1e-10);
      CHECK(m(1, 2).real() <= 1e-12);
    }
  }

  TEST_CASE("singlet is protected") {
    for (double eps : {0.0, 0.2, 0.5}) {
      const auto l = build_liouvillian(public_bath(eps));
      const auto ss = steady_state(l, TwoQubitState::dfs1());
      CHECK(trace_distance(ss.state.matrix(), TwoQubitState::dfs1().matrix()) < 1e-9);
      auto traj = evolve(TwoQubitState::dfs1(), l, time_grid(1.0, 100, GridKind::log, 1e-5));
      annotate(traj);
      for (double c : traj.concurrence) CHECK(std::abs(c - 1.0) < 1e-6);
    }
  }

  TEST_CASE("steady state matches long-time evolution") {
    std::mt19937_64 rng(99);
    for (int n = 0; n < 20; ++n) {
      const auto p = random_params(rng);
      const auto rho0 = random_state(rng);
      const auto l = build_liouvillian(p);
      const auto ss = steady_state(l, rho0);
      REQUIRE(ss.slowest_rate > 0.0);
      const double t = 20.0 / ss.slowest_rate;
      const auto traj = evolve(rho0, l, {0.0, t});
      CHECK(trace_distance(ss.state.matrix(), traj.states.back().matrix()) < 1e-6);
    }
  }

  TEST_CASE("X-shaped steady state") {
    auto p = public_bath(0.0);
    p.kappa = 2e11;
    p.kappa_nv = 1e3;
    p.kappa_deph = 1e3;
    SUBCASE("dissipators alone give an X state") {
      for (double eps : {0.0, 0.3}) {
        p.epsilon = eps;
        p.eta0 = 0.0;
        const auto r = steady_state(build_liouvillian(p), TwoQubitState::plus_minus()).state.matrix();
        CHECK(max_off_x(r) < 1e-8);
        if (eps > 0.0)
          CHECK(std::abs(r(0, 3)) > 1e-3);
        else
          CHECK(std::abs(r(0, 3)) < 1e-12);
      }
    }
    SUBCASE("the drive leaks outside the X at order eta0 eps / kappa") {
      p.epsilon = 0.2;
      for (double eta0 : {-8.9e5, -8.9e6}) {
        p.eta0 = eta0;
        const auto r = steady_state(build_liouvillian(p), TwoQubitState::plus_minus()).state.matrix();
        const double scale = std::abs(eta0 * p.epsilon) / p.kappa;
        CHECK(max_off_x(r) < 10.0 * scale);
        CHECK(max_off_x(r) > 0.1 * scale);
      }
    }
  }

  TEST_CASE("squeezing matrix element") {
    for (double eps : {0.1, 0.2, 0.4}) {
      const auto p = public_bath(eps);
      const auto l = build_liouvillian(p);
      // |00><11| -> |10><10| through 2 S+ rho S+
      const auto el = l.matrix(vec_index(1, 1), vec_index(3, 0));
      CHECK(el.real() == Approx(-p.kappa * eps * eps).epsilon(1e-12));
      CHECK(el.imag() == 0.0);
    }
  }

  TEST_CASE("frame consistency at reduced splitting") {
    auto p = public_bath(0.0);
    p.kappa_nv = 20.0;
    p.kappa_deph = 5.0;
    p.nbar0 = 0.1;
    auto q = p;
    q.frame = Frame::lab;
    q.omega = 2e3;
    const auto times = time_grid(0.2, 201, GridKind::linear);
    for (const auto& rho0 : {TwoQubitState::plus_minus(), TwoQubitState::bell_plus()}) {
      auto a = evolve(rho0, build_liouvillian(p), times);
      auto b = evolve(rho0, build_liouvillian(q), times);
      annotate(a);
      annotate(b);
      for (std::size_t i = 0; i < times.size(); ++i) {
        const auto &ra = a.states[i].matrix(), &rb = b.states[i].matrix();
        for (int k = 0; k < 4; ++k) CHECK(std::abs(ra(k, k) - rb(k, k)) < 1e-6);
        CHECK(std::abs(std::abs(ra(1, 2)) - std::abs(rb(1, 2))) < 1e-6);
        CHECK(std::abs(std::abs(ra(0, 3)) - std::abs(rb(0, 3))) < 1e-6);
        CHECK(std::abs(a.concurrence[i] - b.concurrence[i]) < 1e-6);
        CHECK(std::abs(a.coherence[i] - b.coherence[i]) < 1e-6);
      }
    }
  }

  TEST_CASE("matrix exponential fallback agrees") {
    std::mt19937_64 rng(3);
    const auto p = random_params(rng);
    const auto l = build_liouvillian(p);
    const auto times = time_grid(0.5, 30, GridKind::linear);
    EvolveOptions fb;
    fb.force_fallback = true;
    const auto a = evolve(TwoQubitState::plus_minus(), l, times);
    const auto b = evolve(TwoQubitState::plus_minus(), l, times, fb);
    CHECK_FALSE(a.used_fallback);
    CHECK(b.used_fallback);
    for (std::size_t i = 0; i < times.size(); ++i)
      CHECK(trace_distance(a.states[i].matrix(), b.states[i].matrix()) < 1e-10);
  }

  TEST_CASE("parameter validation and grids") {
    MasterEqParams p;
    p.kappa = -1.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    CHECK_THROWS_AS(evolve(TwoQubitState(), build_liouvillian(MasterEqParams{}), {1.0, 0.5}), ValidationError);
    const auto g = time_grid(1.0, 5, GridKind::linear);
    CHECK(g.size() == 5);
    CHECK(g.back() == 1.0);
    const auto lg = time_grid(1.0, 4, GridKind::log, 1e-3);
    CHECK(lg.front() == 0.0);
    CHECK(lg[1] == Approx(1e-3));
    CHECK(lg.back() == Approx(1.0));
    CHECK(parse_frame("lab") == Frame::lab);
    CHECK_THROWS_AS(parse_frame("nope"), ValidationError);
  }
}
