#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <thread>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "crncert/cone.hpp"
#include "crncert/kinetics.hpp"
#include "crncert/network.hpp"

namespace crncert {

using DVec = std::vector<double>;

struct IntegrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IntegratorControls {
  double rtol = 1e-9;
  double atol = 1e-12;
  double eps_clip = 1e-12;  // states clipped to 0 above -eps_clip
  double h_init = 1e-6;
  double h_min = 1e-14;
};

struct Trajectory {
  DVec times;
  std::vector<DVec> states;
  long accepted = 0, rejected = 0;
  double max_norm = 0;  // max-norm bound observed along the trajectory
};

namespace detail {

inline std::vector<DVec> gamma_double(const ReactionNetwork& net) {
  RatMat g = stoichiometric_matrix(net);
  std::vector<DVec> gd(g.rows(), DVec(g.cols()));
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j) gd[i][j] = g(i, j).get_d();
  return gd;
}

inline DVec derivative(const KineticModel& model, const std::vector<DVec>& gd, const DVec& x) {
  DVec xc = x;
  for (auto& c : xc) c = std::max(c, 0.0);
  DVec v = rate_vector<double>(model, xc);
  DVec dx(gd.size(), 0.0);
  for (std::size_t i = 0; i < gd.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) dx[i] += gd[i][j] * v[j];
  return dx;
}

// Dormand-Prince 5(4) pair
struct Dopri5 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

}  // namespace detail

class Integrator {
 public:
  Integrator(const KineticModel& model, IntegratorControls controls = {})
      : model_(model), gd_(detail::gamma_double(*model.net)), ctl_(controls) {}

  /// One embedded step from (t, x) with size h; fills x5 (5th order) and the
  /// embedded error estimate.
  void step(const DVec& x, double h, DVec& x5, DVec& err) const {
    using D = detail::Dopri5;
    const std::size_t m = x.size();
    DVec k1 = f(x), tmp(m);
    auto at = [&](std::initializer_list<std::pair<const DVec*, double>> terms) {
      for (std::size_t i = 0; i < m; ++i) {
        double s = x[i];
        for (auto& [k, w] : terms) s += h * w * (*k)[i];
        tmp[i] = s;
      }
      return f(tmp);
    };
    DVec k2 = at({{&k1, D::a21}});
    DVec k3 = at({{&k1, D::a31}, {&k2, D::a32}});
    DVec k4 = at({{&k1, D::a41}, {&k2, D::a42}, {&k3, D::a43}});
    DVec k5 = at({{&k1, D::a51}, {&k2, D::a52}, {&k3, D::a53}, {&k4, D::a54}});
    DVec k6 = at({{&k1, D::a61}, {&k2, D::a62}, {&k3, D::a63}, {&k4, D::a64}, {&k5, D::a65}});
    x5.resize(m);
    for (std::size_t i = 0; i < m; ++i)
      x5[i] = x[i] + h * (D::b1 * k1[i] + D::b3 * k3[i] + D::b4 * k4[i] + D::b5 * k5[i] +
                          D::b6 * k6[i]);
    DVec k7 = f(x5);
    err.resize(m);
    for (std::size_t i = 0; i < m; ++i)
      err[i] = h * (D::e1 * k1[i] + D::e3 * k3[i] + D::e4 * k4[i] + D::e5 * k5[i] + D::e6 * k6[i] +
                    D::e7 * k7[i]);
  }

  /// Integrate to t_end; states recorded at sample_times (or at every
  /// accepted step when empty). Step rejection keeps components above
  /// -eps_clip; small negatives are clipped to zero.
  Trajectory integrate(DVec x, double t_end, const DVec& sample_times = {}) const {
    for (double c : x)
      if (c < 0) throw std::domain_error("integrate: negative initial condition");
    Trajectory traj;
    double t = 0;
    std::size_t next_sample = 0;
    auto record = [&](double tt, const DVec& xx) {
      traj.times.push_back(tt);
      traj.states.push_back(xx);
    };
    auto note_norm = [&](const DVec& xx) {
      for (double c : xx) traj.max_norm = std::max(traj.max_norm, std::abs(c));
    };
    note_norm(x);
    if (sample_times.empty()) record(0, x);
    double h = ctl_.h_init;
    while (t < t_end) {
      while (next_sample < sample_times.size() && sample_times[next_sample] <= t + 1e-15) {
        record(sample_times[next_sample], x);
        ++next_sample;
      }
      double limit = t_end;
      if (next_sample < sample_times.size()) limit = std::min(limit, sample_times[next_sample]);
      h = std::min(h, limit - t);
      if (h <= 0) h = ctl_.h_min;

      DVec x5, err;
      step(x, h, x5, err);
      bool finite = true;
      double en = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x5[i])) finite = false;
        double sc = ctl_.atol + ctl_.rtol * std::max(std::abs(x[i]), std::abs(x5[i]));
        en = std::max(en, std::abs(err[i]) / sc);
      }
      bool neg = false;
      for (double c : x5)
        if (c < -ctl_.eps_clip) neg = true;
      if (!finite) {
        traj.rejected++;
        h *= 0.25;
      } else if (en > 1.0 || neg) {
        traj.rejected++;
        h *= neg ? 0.5 : std::max(0.2, 0.9 * std::pow(en, -0.2));
      } else {
        t += h;
        for (double& c : x5)
          if (c < 0) c = 0;
        x = std::move(x5);
        note_norm(x);
        traj.accepted++;
        if (sample_times.empty()) record(t, x);
        double grow = en > 0 ? std::min(5.0, 0.9 * std::pow(en, -0.2)) : 5.0;
        h = std::max(h * grow, ctl_.h_min);
      }
      if (h < ctl_.h_min)
        throw IntegrationError("step-size underflow at t = " + std::to_string(t));
    }
    while (next_sample < sample_times.size()) {
      record(sample_times[next_sample], x);
      ++next_sample;
    }
    return traj;
  }

  DVec f(const DVec& x) const { return detail::derivative(model_, gd_, x); }

  double residual_norm(const DVec& x) const {
    double r = 0;
    for (double d : f(x)) r = std::max(r, std::abs(d));
    return r;
  }

  const KineticModel& model() const { return model_; }
  const std::vector<DVec>& gamma() const { return gd_; }

 private:
  const KineticModel& model_;
  std::vector<DVec> gd_;
  IntegratorControls ctl_;
};

inline Trajectory integrate(const KineticModel& model, const DVec& x0, double t_end,
                            IntegratorControls controls = {}) {
  return Integrator(model, controls).integrate(x0, t_end);
}

struct EquilibriumControls {
  double tol_eq = 1e-10;   // residual ||Gamma v||_inf at the returned point
  double t_chunk = 20.0;   // integration horizon between Newton attempts
  int max_chunks = 200;
  int max_newton = 60;
};

namespace detail {

// Damped Newton on the reduced system v(x_base + Gamma xi) = 0; conservation
// is automatic in these coordinates.
inline bool newton_polish(const Integrator& integ, DVec& x, double tol, int max_iter) {
  const KineticModel& model = integ.model();
  const auto& gd = integ.gamma();
  const std::size_t m = x.size(), n = gd.empty() ? 0 : gd[0].size();
  DVec base = x;
  DVec xi(n, 0.0);
  auto point = [&](const DVec& z) {
    DVec p(m);
    for (std::size_t i = 0; i < m; ++i) {
      p[i] = base[i];
      for (std::size_t j = 0; j < n; ++j) p[i] += gd[i][j] * z[j];
    }
    return p;
  };
  auto rate_norm = [&](const DVec& p) {
    double s = 0;
    for (double vv : rate_vector<double>(model, p)) s = std::max(s, std::abs(vv));
    return s;
  };
  auto admissible = [&](const DVec& p) {
    for (double c : p)
      if (c < -1e-12 || !std::isfinite(c)) return false;
    return true;
  };

  for (int it = 0; it < max_iter; ++it) {
    DVec p = point(xi);
    DVec v = rate_vector<double>(model, p);
    double vn = 0;
    for (double vv : v) vn = std::max(vn, std::abs(vv));
    if (vn <= tol * 1e-2 || (it > 0 && vn <= tol)) break;

    auto V = jacobian<double>(model, p);  // n x m
    // J = V * Gamma (n x n)
    std::vector<DVec> J(n, DVec(n, 0.0));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t b = 0; b < n; ++b) J[a][b] += V[a][i] * gd[i][b];
    // solve J d = -v by partial-pivot elimination
    DVec rhs(n);
    for (std::size_t a = 0; a < n; ++a) rhs[a] = -v[a];
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t piv = col;
      for (std::size_t row = col + 1; row < n; ++row)
        if (std::abs(J[row][col]) > std::abs(J[piv][col])) piv = row;
      if (std::abs(J[piv][col]) < 1e-300) return false;
      std::swap(J[piv], J[col]);
      std::swap(rhs[piv], rhs[col]);
      for (std::size_t row = col + 1; row < n; ++row) {
        double fct = J[row][col] / J[col][col];
        for (std::size_t cc = col; cc < n; ++cc) J[row][cc] -= fct * J[col][cc];
        rhs[row] -= fct * rhs[col];
      }
    }
    DVec d(n);
    for (std::size_t a = n; a-- > 0;) {
      double s = rhs[a];
      for (std::size_t b = a + 1; b < n; ++b) s -= J[a][b] * d[b];
      d[a] = s / J[a][a];
    }
    double lambda = 1.0;
    bool moved = false;
    for (int bt = 0; bt < 40; ++bt, lambda *= 0.5) {
      DVec trial(n);
      for (std::size_t a = 0; a < n; ++a) trial[a] = xi[a] + lambda * d[a];
      DVec tp = point(trial);
      if (!admissible(tp)) continue;
      if (rate_norm(tp) < vn * (1 - 0.25 * lambda) + 1e-300) {
        xi = trial;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  DVec p = point(xi);
  for (double& c : p)
    if (c < 0 && c > -1e-12) c = 0;
  if (!admissible(p)) return false;
  if (integ.residual_norm(p) > tol) return false;
  x = p;
  return true;
}

}  // namespace detail

/// Integrate toward the attractor, then polish with damped Newton on the
/// reduced coordinates. Throws IntegrationError when the budget runs out.
inline DVec find_equilibrium(const KineticModel& model, const DVec& x0,
                             EquilibriumControls ectl = {}, IntegratorControls ictl = {},
                             double* max_norm_seen = nullptr) {
  Integrator integ(model, ictl);
  DVec x = x0;
  double norm_seen = 0;
  for (double c : x) norm_seen = std::max(norm_seen, std::abs(c));
  double last_residual = integ.residual_norm(x);
  for (int chunk = 0; chunk < ectl.max_chunks; ++chunk) {
    DVec cand = x;
    if (detail::newton_polish(integ, cand, ectl.tol_eq, ectl.max_newton)) {
      if (max_norm_seen) *max_norm_seen = std::max(norm_seen, *std::max_element(cand.begin(), cand.end()));
      return cand;
    }
    Trajectory traj = integ.integrate(x, ectl.t_chunk);
    x = traj.states.back();
    norm_seen = std::max(norm_seen, traj.max_norm);
    last_residual = integ.residual_norm(x);
    if (last_residual <= ectl.tol_eq) {
      if (max_norm_seen) *max_norm_seen = norm_seen;
      return x;
    }
  }
  throw IntegrationError("find_equilibrium: no convergence within budget, last residual " +
                         std::to_string(last_residual));
}

struct ExperimentTolerances {
  double tol_conv = 1e-6;   // pairwise final-state distance
  double tol_cons = 1e-9;   // conservation drift, relative
  double tau_K = 1e-8;      // cone membership slack
  double tol_eq = 1e-10;    // equilibrium residual
};

namespace detail {

// Run fn(i) for i in [0, count) on up to CRNCERT_THREADS workers. Work is
// partitioned by index so results merge deterministically regardless of the
// worker count; the first exception (lowest index) is rethrown.
inline void parallel_for(long count, const std::function<void(long)>& fn) {
  long workers = 1;
  if (const char* env = std::getenv("CRNCERT_THREADS")) workers = std::atol(env);
  workers = std::max(1L, std::min({workers, count, long(std::thread::hardware_concurrency())}));
  if (workers <= 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errs(count);
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  for (long w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (long i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          errs[i] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (long i = 0; i < count; ++i)
    if (errs[i]) std::rethrow_exception(errs[i]);
}

}  // namespace detail

struct ClassExperimentReport {
  double h = 0;
  DVec equilibrium;
  double max_pairwise_distance = 0;
  double max_drift = 0;
  bool all_bounded = true;
  bool converged = false;
  int count = 0;
  std::uint64_t seed = 0;
};

struct SamplingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Theorem-13 experiment: N initial conditions on the stoichiometry class of
/// x_ref must all reach one equilibrium with conserved r^T x.
inline ClassExperimentReport class_convergence_experiment(const KineticModel& model, const RatVec& r,
                                                          const DVec& x_ref, int count,
                                                          std::uint64_t seed,
                                                          ExperimentTolerances tol = {}) {
  const ReactionNetwork& net = *model.net;
  auto gd = detail::gamma_double(net);
  const std::size_t m = x_ref.size(), n = gd.empty() ? 0 : gd[0].size();
  DVec rd(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) rd[i] = r[i].get_d();
  double h = 0, rmin = rd.empty() ? 1 : rd[0];
  for (std::size_t i = 0; i < m; ++i) {
    h += rd[i] * x_ref[i];
    rmin = std::min(rmin, rd[i]);
  }
  const double bound = (rmin > 0 ? h / rmin : 1e300) * (1 + 1e-6) + 1e-9;

  ClassExperimentReport rep;
  rep.h = h;
  rep.seed = seed;
  rep.count = count;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double scale = 0;
  for (double c : x_ref) scale = std::max(scale, c);
  if (scale == 0) scale = 1;

  std::vector<DVec> starts;
  starts.push_back(x_ref);
  long attempts = 0, max_attempts = 400L * count + 400;
  while (int(starts.size()) < count) {
    if (++attempts > max_attempts)
      throw SamplingError("class too thin: could not draw " + std::to_string(count) + " samples");
    DVec x(m);
    bool ok = true;
    DVec xi(n);
    for (std::size_t j = 0; j < n; ++j) xi[j] = 0.4 * scale * u(rng);
    for (std::size_t i = 0; i < m && ok; ++i) {
      x[i] = x_ref[i];
      for (std::size_t j = 0; j < n; ++j) x[i] += gd[i][j] * xi[j];
      if (x[i] < 0) ok = false;
    }
    if (ok) starts.push_back(std::move(x));
  }
  if (int(starts.size()) > count) starts.resize(count);

  std::vector<DVec> finals(starts.size());
  std::vector<double> drifts(starts.size(), 0.0);
  std::vector<char> bounded(starts.size(), 1);
  EquilibriumControls ectl;
  ectl.tol_eq = tol.tol_eq;
  detail::parallel_for(long(starts.size()), [&](long s) {
    const DVec& x0 = starts[s];
    double seen = 0;
    DVec e = find_equilibrium(model, x0, ectl, {}, &seen);
    if (seen > bound) bounded[s] = 0;
    double h0 = 0, h1 = 0;
    for (std::size_t i = 0; i < m; ++i) {
      h0 += rd[i] * x0[i];
      h1 += rd[i] * e[i];
    }
    drifts[s] = std::abs(h1 - h0);
    finals[s] = std::move(e);
  });
  for (std::size_t s = 0; s < starts.size(); ++s) {
    rep.max_drift = std::max(rep.max_drift, drifts[s]);
    if (!bounded[s]) rep.all_bounded = false;
  }
  for (std::size_t a = 0; a < finals.size(); ++a)
    for (std::size_t b = a + 1; b < finals.size(); ++b) {
      double d = 0;
      for (std::size_t i = 0; i < m; ++i) d = std::max(d, std::abs(finals[a][i] - finals[b][i]));
      rep.max_pairwise_distance = std::max(rep.max_pairwise_distance, d);
    }
  rep.equilibrium = finals.front();
  rep.converged = rep.max_pairwise_distance <= tol.tol_conv &&
                  rep.max_drift <= tol.tol_cons * (1 + std::abs(h)) && rep.all_bounded;
  return rep;
}

namespace detail {
inline RatVec rat_vec_of(const DVec& x) {
  RatVec v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = Rat(x[i]);  // exact binary value
  return v;
}
}  // namespace detail

/// Membership in K up to slack tau * ||y||_1, as an exact LP on the binary
/// values of y. Extreme-ray boundary cases would flap without the slack.
inline bool approx_cone_member(const CubicCone& cone, const DVec& y, double tau) {
  RatVec yr = detail::rat_vec_of(y);
  Rat slack_budget = 0;
  for (const auto& q : yr) slack_budget += abs(q);
  slack_budget *= Rat(tau);
  const int w = cone.lambda.cols(), m = cone.m;
  // variables: z (w), s+ (m), s- (m), t (1)
  RatMat a(m + 1, w + 2 * m + 1);
  RatVec b(m + 1);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < w; ++j) a(i, j) = cone.lambda(i, j);
    a(i, w + i) = 1;
    a(i, w + m + i) = -1;
    b[i] = yr[i];
  }
  for (int i = 0; i < 2 * m; ++i) a(m, w + i) = 1;
  a(m, w + 2 * m) = 1;
  b[m] = slack_budget;
  return lp_feasible(a, b);
}

inline Rat approx_interior_margin(const CubicCone& cone, const DVec& y) {
  InteriorResult r = cone_interior_member(cone, detail::rat_vec_of(y));
  return r.interior ? r.margin : Rat(0);
}

struct OrderExperimentReport {
  int pairs = 0;
  int checks = 0;
  int membership_violations = 0;
  int interior_violations = 0;
  std::uint64_t seed = 0;
  bool passed() const { return membership_violations == 0 && interior_violations == 0; }
};

/// Lemma-2 experiment: ordered pairs x1 = x0 + Lambda z stay ordered, and
/// interior pairs stay strictly ordered, along the flow.
inline OrderExperimentReport order_preservation_experiment(const KineticModel& model,
                                                           const CubicCone& cone, int pair_count,
                                                           double horizon, int sample_count,
                                                           std::uint64_t seed,
                                                           ExperimentTolerances tol = {}) {
  OrderExperimentReport rep;
  rep.pairs = pair_count;
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> upos(0.2, 1.5), uz(0.0, 0.4);
  const int m = cone.m, w = cone.lambda.cols();
  std::vector<DVec> lam(m, DVec(w));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < w; ++j) lam[i][j] = cone.lambda(i, j).get_d();

  DVec sample_times(sample_count);
  for (int s = 0; s < sample_count; ++s) sample_times[s] = horizon * double(s + 1) / sample_count;

  Integrator integ(model);
  for (int pair = 0; pair < pair_count; ++pair) {
    DVec x0(m), z(w, 0.0);
    for (int i = 0; i < m; ++i) x0[i] = upos(rng);
    // two random generator directions, at least one strictly positive weight
    int j1 = int(rng() % w), j2 = int(rng() % w);
    z[j1] = uz(rng) + 0.05;
    z[j2] += uz(rng);
    DVec x1 = x0;
    bool nonneg = true;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < w; ++j) x1[i] += lam[i][j] * z[j];
      if (x1[i] < 0) nonneg = false;
    }
    if (!nonneg) {
      --pair;  // resample
      continue;
    }
    Trajectory t0 = integ.integrate(x0, horizon, sample_times);
    Trajectory t1 = integ.integrate(x1, horizon, sample_times);
    for (int s = 0; s < sample_count; ++s) {
      DVec y(m);
      for (int i = 0; i < m; ++i) y[i] = t1.states[s][i] - t0.states[s][i];
      ++rep.checks;
      if (!approx_cone_member(cone, y, tol.tau_K)) ++rep.membership_violations;
      if (approx_interior_margin(cone, y) <= 0) ++rep.interior_violations;
    }
  }
  return rep;
}

/// Negative control: a cone with one generator column negated.
inline CubicCone corrupt_cone(CubicCone cone, int column = 0) {
  for (int i = 0; i < cone.m; ++i) cone.lambda(i, column) = -cone.lambda(i, column);
  return cone;
}

/// CSV: header `t,x_<species>...`, one row per recorded state.
inline std::string trajectory_csv(const Trajectory& traj, const std::vector<std::string>& species) {
  std::ostringstream out;
  out.precision(15);
  out << "t";
  for (const auto& s : species) out << ",x_" << s;
  out << "\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    out << traj.times[k];
    for (double c : traj.states[k]) out << "," << c;
    out << "\n";
  }
  return out.str();
}

}  // namespace crncert
