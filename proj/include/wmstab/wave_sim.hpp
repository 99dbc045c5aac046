#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wmstab {

// Radial field snapshot on the uniform grid r_i = i h, i = 0..n-1.
// Regularity pins u(t, 0) = 0; the outer node is held at its initial value
// (zero flux), with the domain sized so the boundary stays causally out of
// reach of the region of interest.
template <class T>
struct WaveState {
  T h{};
  T t{};
  std::vector<T> u, ut;
  std::size_t n() const { return u.size(); }
  T radius() const { return h * T(n() - 1); }
};

template <class T>
struct Trajectory {
  std::vector<WaveState<T>> snapshots;
  std::vector<std::pair<T, T>> slope_history;   // (t, du/dr at r=0)
  std::vector<std::pair<T, T>> energy_history;  // (t, E)
  bool scheme_failed = false;                   // NaN / energy explosion
  std::string stop_reason;
};

enum class InitialDataKind { exact_self_similar, truncated_self_similar, gaussian_lump, zero };

template <class T>
struct InitialDataParams {
  T blowup_time = T(1);   // T in the self-similar profile 2 arctan(r/T)
  T amplitude = T(8);     // gaussian lump
  T width = T(1.2);
  T cutoff_radius = T(2);  // truncation start, smooth to zero over one width
};

namespace detail {
// C^2 cutoff: 1 on [0, a], quintic smoothstep down to 0 on [a, b]
template <class T>
T bump_down(T r, T a, T b) {
  if (r <= a) return T(1);
  if (r >= b) return T(0);
  const T s = (r - a) / (b - a);
  return T(1) - s * s * s * (T(10) - T(15) * s + T(6) * s * s);
}
}  // namespace detail

template <class T>
T central_slope(const WaveState<T>& s) {
  return (T(4) * s.u[1] - s.u[2]) / (T(2) * s.h);
}

template <class T>
T energy(const WaveState<T>& s) {
  // trapezoid of (u_t^2 + u_r^2) r^2 + 2 sin^2 u
  const std::size_t n = s.n();
  std::vector<T> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    T ur;
    if (i == 0)
      ur = (T(4) * s.u[1] - s.u[2]) / (T(2) * s.h);
    else if (i + 1 == n)
      ur = (T(3) * s.u[i] - T(4) * s.u[i - 1] + s.u[i - 2]) / (T(2) * s.h);
    else
      ur = (s.u[i + 1] - s.u[i - 1]) / (T(2) * s.h);
    const T r = s.h * T(i);
    const T sn = std::sin(s.u[i]);
    f[i] = (s.ut[i] * s.ut[i] + ur * ur) * r * r + T(2) * sn * sn;
  }
  T e(0);
  for (std::size_t i = 0; i + 1 < n; ++i) e += (f[i] + f[i + 1]) / T(2) * s.h;
  return e;
}

template <class T>
WaveState<T> make_initial_data(InitialDataKind kind, const InitialDataParams<T>& p,
                               std::size_t n_nodes, T R) {
  if (n_nodes < 16) throw std::invalid_argument("make_initial_data: grid too small");
  WaveState<T> s;
  s.h = R / T(n_nodes - 1);
  s.t = T(0);
  s.u.assign(n_nodes, T(0));
  s.ut.assign(n_nodes, T(0));
  const T Tb = p.blowup_time;
  for (std::size_t i = 0; i < n_nodes; ++i) {
    const T r = s.h * T(i);
    switch (kind) {
      case InitialDataKind::zero:
        break;
      case InitialDataKind::exact_self_similar:
        s.u[i] = T(2) * std::atan(r / Tb);
        s.ut[i] = T(2) * r / (Tb * Tb + r * r);
        break;
      case InitialDataKind::truncated_self_similar: {
        const T chi = detail::bump_down(r, p.cutoff_radius * Tb, p.cutoff_radius * Tb + Tb);
        s.u[i] = T(2) * std::atan(r / Tb) * chi;
        s.ut[i] = T(2) * r / (Tb * Tb + r * r) * chi;
        break;
      }
      case InitialDataKind::gaussian_lump:
        s.u[i] = p.amplitude * r * r * std::exp(-r * r / (p.width * p.width)) /
                 (T(1) + r * r);
        break;
    }
  }
  s.u[0] = T(0);
  s.ut[0] = T(0);
  // grid must resolve the data
  for (std::size_t i = 0; i + 1 < n_nodes; ++i)
    if (std::abs(s.u[i + 1] - s.u[i]) > T(0.5))
      throw std::invalid_argument("make_initial_data: data exceeds grid-resolvable gradient");
  return s;
}

namespace detail {

// u_tt = u_rr + (2/r) u_r - sin(2u)/r^2, second-order centered interior;
// origin pinned by regularity, outer node held fixed
template <class T>
void accel(const std::vector<T>& u, std::vector<T>& out, T h) {
  const std::size_t n = u.size();
  const T h2 = h * h;
  out[0] = T(0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const T r = h * T(i);
    const T urr = (u[i + 1] - T(2) * u[i] + u[i - 1]) / h2;
    const T ur = (u[i + 1] - u[i - 1]) / (T(2) * h);
    out[i] = urr + T(2) * ur / r - std::sin(T(2) * u[i]) / (r * r);
  }
  out[n - 1] = T(0);
}

}  // namespace detail

// Classical RK4 on (u, u_t) with dt = cfl h. The slope history is recorded
// every step; snapshots every snapshot_every steps. Integration stops at
// t_end, or when the central slope exceeds the resolution limit
// (slope * h > 0.8), or on scheme failure.
template <class T>
Trajectory<T> evolve(const WaveState<T>& s0, T cfl, T t_end, std::size_t snapshot_every) {
  if (!(cfl > T(0) && cfl <= T(0.9))) throw std::invalid_argument("evolve: 0 < cfl <= 0.9");
  Trajectory<T> traj;
  WaveState<T> s = s0;
  const T dt = cfl * s.h;
  const std::size_t n = s.n();
  const T e0 = energy(s);

  traj.snapshots.push_back(s);
  traj.slope_history.push_back({s.t, central_slope(s)});
  traj.energy_history.push_back({s.t, e0});

  // stage buffers: k*u = du/dt stages, k*v = dv/dt stages
  std::vector<T> k1v(n), k2v(n), k3v(n), k4v(n);
  std::vector<T> k2u(n), k3u(n), k4u(n), work(n);
  const auto stage_u = [&](const std::vector<T>& ku, T w) {
    for (std::size_t i = 1; i + 1 < n; ++i) work[i] = s.u[i] + w * ku[i];
    work[0] = s.u[0];
    work[n - 1] = s.u[n - 1];
  };
  std::size_t step = 0;
  while (s.t < t_end - dt / 2) {
    detail::accel(s.u, k1v, s.h);  // k1u = s.ut
    for (std::size_t i = 0; i < n; ++i) k2u[i] = s.ut[i] + dt / 2 * k1v[i];
    stage_u(s.ut, dt / 2);
    detail::accel(work, k2v, s.h);
    for (std::size_t i = 0; i < n; ++i) k3u[i] = s.ut[i] + dt / 2 * k2v[i];
    stage_u(k2u, dt / 2);
    detail::accel(work, k3v, s.h);
    for (std::size_t i = 0; i < n; ++i) k4u[i] = s.ut[i] + dt * k3v[i];
    stage_u(k3u, dt);
    detail::accel(work, k4v, s.h);

    for (std::size_t i = 1; i + 1 < n; ++i) {
      s.u[i] += dt / 6 * (s.ut[i] + T(2) * k2u[i] + T(2) * k3u[i] + k4u[i]);
      s.ut[i] += dt / 6 * (k1v[i] + T(2) * k2v[i] + T(2) * k3v[i] + k4v[i]);
    }
    s.t += dt;
    ++step;

    const T sl = central_slope(s);
    traj.slope_history.push_back({s.t, sl});
    if (!std::isfinite(sl)) {
      traj.scheme_failed = true;
      traj.stop_reason = "nan";
      break;
    }
    if (step % snapshot_every == 0) {
      traj.snapshots.push_back(s);
      const T e = energy(s);
      traj.energy_history.push_back({s.t, e});
      if (e > T(50) * std::max(e0, T(1e-12))) {
        traj.scheme_failed = true;
        traj.stop_reason = "energy explosion";
        break;
      }
    }
    if (sl * s.h > T(0.8)) {
      traj.stop_reason = "resolution limit";
      break;
    }
  }
  if (traj.stop_reason.empty()) traj.stop_reason = "t_end";
  return traj;
}

template <class T>
struct BlowupEstimate {
  bool blew_up = false;
  T T_est{};
  T uncertainty{};
  std::size_t points_used = 0;
};

// Fit 1/slope = (T - t)/2 over the last resolved decade of central-slope
// growth; T is the zero crossing of the regression line. Trajectories whose
// slope never approaches the resolution scale get a no-blowup verdict.
template <class T>
BlowupEstimate<T> detect_blowup(const Trajectory<T>& traj) {
  BlowupEstimate<T> out;
  if (traj.scheme_failed || traj.slope_history.size() < 16) return out;
  const T h = traj.snapshots.front().h;

  T smax(0);
  for (const auto& [t, sl] : traj.slope_history)
    if (sl * h < T(0.5)) smax = std::max(smax, sl);
  if (smax * h < T(0.35)) return out;  // never collapsed to the grid scale

  // last decade of growth, resolved points only
  std::vector<std::pair<T, T>> pts;
  for (const auto& [t, sl] : traj.slope_history)
    if (sl > smax / T(10) && sl * h < T(0.5) && sl > T(0)) pts.push_back({t, T(1) / sl});
  if (pts.size() < 8) return out;

  // require growth across the tail
  if (pts.back().second > pts.front().second) return out;

  long double St = 0, Sq = 0, Stt = 0, Stq = 0, m = (long double)pts.size();
  for (const auto& [t, q] : pts) {
    St += (long double)t;
    Sq += (long double)q;
    Stt += (long double)t * t;
    Stq += (long double)t * q;
  }
  const long double det = m * Stt - St * St;
  const long double beta = (m * Stq - St * Sq) / det;   // ~ -1/2
  const long double alpha = (Sq * Stt - St * Stq) / det;
  if (!(beta < 0)) return out;

  out.blew_up = true;
  out.T_est = static_cast<T>(-alpha / beta);
  out.points_used = pts.size();

  // residual-based uncertainty of the zero crossing
  long double ss = 0;
  for (const auto& [t, q] : pts) {
    const long double r = q - (alpha + beta * t);
    ss += r * r;
  }
  const long double sigma2 = ss / std::max(1.0L, m - 2);
  const long double var_a = sigma2 * Stt / det;
  const long double var_b = sigma2 * m / det;
  const long double cov_ab = -sigma2 * St / det;
  const long double dTda = -1.0L / beta;
  const long double dTdb = alpha / (beta * beta);
  out.uncertainty = static_cast<T>(
      std::sqrt(std::max(0.0L, dTda * dTda * var_a + 2 * dTda * dTdb * cov_ab +
                                   dTdb * dTdb * var_b)));
  return out;
}

}  // namespace wmstab
