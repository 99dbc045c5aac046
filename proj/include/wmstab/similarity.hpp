#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "wmstab/wave_sim.hpp"

namespace wmstab {

// Profile in similarity variables: U(tau, rho) = u(t, (T-t) rho),
// tau = -ln(T-t).
template <class T>
struct SimilarityFrame {
  T tau{};
  T s{};  // T - t
  std::vector<T> U;
};

template <class T>
std::vector<T> attractor_profile(const std::vector<T>& rho) {
  std::vector<T> v(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) v[i] = T(2) * std::atan(rho[i]);
  return v;
}

namespace detail {
// 4-point Lagrange interpolation on the uniform grid
template <class T>
T interp_cubic(const std::vector<T>& u, T h, T r) {
  const std::size_t n = u.size();
  T xi = r / h;
  std::size_t i = static_cast<std::size_t>(xi);
  i = std::clamp<std::size_t>(i, 1, n - 3);
  const T x = xi - T(i);
  const T um = u[i - 1], u0 = u[i], up = u[i + 1], upp = u[i + 2];
  return -x * (x - 1) * (x - 2) / T(6) * um + (x * x - 1) * (x - 2) / T(2) * u0 -
         x * (x + 1) * (x - 2) / T(2) * up + x * (x * x - 1) / T(6) * upp;
}
}  // namespace detail

// Interpolates each snapshot with t < T onto the fixed rho grid; snapshots
// with T - t below 5h are no longer resolved and are excluded.
template <class T>
std::vector<SimilarityFrame<T>> similarity_frames(const Trajectory<T>& traj, T Tblow,
                                                  const std::vector<T>& rho) {
  std::vector<SimilarityFrame<T>> frames;
  if (traj.snapshots.empty()) return frames;
  const T h = traj.snapshots.front().h;
  for (const auto& snap : traj.snapshots) {
    const T s = Tblow - snap.t;
    if (s < T(5) * h) continue;
    if (s * rho.back() + T(2) * h > snap.radius()) continue;
    SimilarityFrame<T> fr;
    fr.s = s;
    fr.tau = -std::log(s);
    fr.U.resize(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i)
      fr.U[i] = rho[i] == T(0) ? T(0) : detail::interp_cubic(snap.u, h, s * rho[i]);
    frames.push_back(std::move(fr));
  }
  return frames;
}

// Refine the blowup time from the central-slope history. The leading
// correction to 1/slope = (T-t)/2 decays like (T-t)^{1-lambda1}; absorbing it
// into a third regression basis removes the bias that otherwise leaks the
// time-shift (gauge) direction into the mode fit.
template <class T>
T refine_blowup_time(const Trajectory<T>& traj, T T0, T lambda1, int iterations = 6) {
  const T h = traj.snapshots.front().h;
  T smax(0);
  for (const auto& [t, sl] : traj.slope_history)
    if (sl * h < T(0.5)) smax = std::max(smax, sl);
  std::vector<std::pair<T, T>> pts;
  for (const auto& [t, sl] : traj.slope_history)
    if (sl > smax / T(20) && sl * h < T(0.5) && sl > T(0)) pts.push_back({t, T(1) / sl});
  if (pts.size() < 12) return T0;

  T Tc = T0;
  const T expo = T(1) - lambda1;
  for (int it = 0; it < iterations; ++it) {
    long double S[3][3] = {}, b[3] = {};
    for (const auto& [t, q] : pts) {
      const long double f[3] = {1.0L, (long double)t,
                                std::pow(std::max((long double)(Tc - t), 1e-12L),
                                         (long double)expo)};
      for (int p = 0; p < 3; ++p) {
        for (int r = 0; r < 3; ++r) S[p][r] += f[p] * f[r];
        b[p] += f[p] * (long double)q;
      }
    }
    const auto det3 = [](long double m[3][3]) {
      return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
             m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
             m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    const long double D = det3(S);
    if (std::abs(D) < 1e-280L) break;
    long double M0[3][3], M1[3][3];
    for (int p = 0; p < 3; ++p)
      for (int r = 0; r < 3; ++r) M0[p][r] = M1[p][r] = S[p][r];
    for (int p = 0; p < 3; ++p) {
      M0[p][0] = b[p];
      M1[p][1] = b[p];
    }
    const long double alpha = det3(M0) / D;
    const long double beta = det3(M1) / D;
    if (!(beta < 0)) break;
    const T Tn = static_cast<T>(-alpha / beta);
    if (std::abs(Tn - Tc) < T(1e-10)) {
      Tc = Tn;
      break;
    }
    Tc = Tn;
  }
  return Tc;
}

template <class T>
struct FitResult {
  T c1{};
  T lambda_est{};       // slope of ln|A(tau)| vs tau
  T lambda_est_err{};   // regression standard error
  T lambda_pairwise{};  // mean of consecutive-frame log ratios
  T lambda_pairwise_err{};
  T tau_lo{}, tau_hi{};  // fit window
  std::vector<T> taus, amplitudes, shape_residuals;
  std::vector<char> in_window;
  bool ok = false;
  std::string message;
};

template <class T>
struct FitOptions {
  T rho_min = T(0.05), rho_max = T(0.95);  // weighted L2 window, weight rho^2
  T max_shape_residual = T(0.3);
  T window_len = T(0);  // 0: use all trusted frames; else last window_len tau units
  std::size_t min_frames = 5;
};

// Least-squares amplitude of the deviation from the attractor against the
// eigenmode shape phi = v1(rho)/rho per frame, then the decay rate from the
// log-amplitude regression and c1 from a single global fit at the mode's
// eigenvalue.
template <class T>
FitResult<T> fit_mode(const std::vector<SimilarityFrame<T>>& frames,
                      const std::vector<T>& rho, const std::vector<T>& phi,
                      T lambda_mode, const FitOptions<T>& opt = {}) {
  FitResult<T> out;
  if (frames.size() < opt.min_frames) {
    out.message = "not enough frames";
    return out;
  }
  const auto U0 = attractor_profile(rho);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < rho.size(); ++i)
    if (rho[i] >= opt.rho_min && rho[i] <= opt.rho_max) idx.push_back(i);

  T phi2(0);
  for (auto i : idx) phi2 += rho[i] * rho[i] * phi[i] * phi[i];

  for (const auto& fr : frames) {
    T num(0), dev2(0);
    for (auto i : idx) {
      const T w = rho[i] * rho[i];
      const T d = fr.U[i] - U0[i];
      num += w * d * phi[i];
      dev2 += w * d * d;
    }
    const T A = num / phi2;
    T res2(0);
    for (auto i : idx) {
      const T w = rho[i] * rho[i];
      const T d = fr.U[i] - U0[i] - A * phi[i];
      res2 += w * d * d;
    }
    out.taus.push_back(fr.tau);
    out.amplitudes.push_back(A);
    out.shape_residuals.push_back(dev2 > T(0) ? std::sqrt(res2 / dev2) : T(0));
  }

  // trust window: shape residual rule, then optionally the last window_len
  std::vector<std::size_t> win;
  T tau_max = -std::numeric_limits<T>::infinity();
  for (std::size_t j = 0; j < out.taus.size(); ++j)
    if (out.shape_residuals[j] <= opt.max_shape_residual && out.amplitudes[j] != T(0))
      tau_max = std::max(tau_max, out.taus[j]);
  for (std::size_t j = 0; j < out.taus.size(); ++j) {
    const bool trusted =
        out.shape_residuals[j] <= opt.max_shape_residual && out.amplitudes[j] != T(0);
    const bool in_win =
        trusted && (opt.window_len <= T(0) || out.taus[j] >= tau_max - opt.window_len);
    if (in_win) win.push_back(j);
  }
  out.in_window.assign(out.taus.size(), 0);
  for (auto j : win) out.in_window[j] = 1;
  if (win.size() < opt.min_frames) {
    out.message = "trust window too small (fit window too early or data contaminated)";
    return out;
  }
  out.tau_lo = out.taus[win.front()];
  out.tau_hi = out.taus[win.back()];

  // regression ln|A| = a + lambda tau
  long double St = 0, Sy = 0, Stt = 0, Sty = 0, m = (long double)win.size();
  for (auto j : win) {
    const long double t = out.taus[j], y = std::log(std::abs((long double)out.amplitudes[j]));
    St += t;
    Sy += y;
    Stt += t * t;
    Sty += t * y;
  }
  const long double det = m * Stt - St * St;
  const long double lam = (m * Sty - St * Sy) / det;
  const long double a0 = (Sy * Stt - St * Sty) / det;
  long double ss = 0;
  for (auto j : win) {
    const long double r =
        std::log(std::abs((long double)out.amplitudes[j])) - (a0 + lam * out.taus[j]);
    ss += r * r;
  }
  out.lambda_est = static_cast<T>(lam);
  out.lambda_est_err =
      static_cast<T>(std::sqrt(std::max(0.0L, ss / std::max(1.0L, m - 2) * m / det)));

  // second estimate: pairwise log ratios
  long double pm = 0, pv = 0;
  std::size_t np = 0;
  for (std::size_t k = 0; k + 1 < win.size(); ++k) {
    const auto j0 = win[k], j1 = win[k + 1];
    const long double dtau = out.taus[j1] - out.taus[j0];
    if (dtau <= 0) continue;
    pm += std::log(std::abs((long double)out.amplitudes[j1] / out.amplitudes[j0])) / dtau;
    ++np;
  }
  if (np > 0) pm /= np;
  for (std::size_t k = 0; k + 1 < win.size(); ++k) {
    const auto j0 = win[k], j1 = win[k + 1];
    const long double dtau = out.taus[j1] - out.taus[j0];
    if (dtau <= 0) continue;
    const long double v =
        std::log(std::abs((long double)out.amplitudes[j1] / out.amplitudes[j0])) / dtau - pm;
    pv += v * v;
  }
  out.lambda_pairwise = static_cast<T>(pm);
  out.lambda_pairwise_err =
      static_cast<T>(np > 1 ? std::sqrt(pv / (np - 1) / np) : T(0));

  // global c1 at the mode eigenvalue: A_j ~ c1 e^{lambda tau_j}
  long double cn = 0, cd = 0;
  for (auto j : win) {
    const long double e = std::exp((long double)lambda_mode * out.taus[j]);
    cn += e * out.amplitudes[j];
    cd += e * e;
  }
  out.c1 = static_cast<T>(cn / cd);
  out.ok = true;
  return out;
}

// synthetic frames U0 + sum_k c_k e^{lambda_k tau} phi_k for fit validation
template <class T>
std::vector<SimilarityFrame<T>> synthetic_frames(const std::vector<T>& rho,
                                                 const std::vector<std::vector<T>>& modes,
                                                 const std::vector<T>& amplitudes,
                                                 const std::vector<T>& rates, T tau_lo,
                                                 T tau_hi, std::size_t n_frames) {
  const auto U0 = attractor_profile(rho);
  std::vector<SimilarityFrame<T>> frames(n_frames);
  for (std::size_t j = 0; j < n_frames; ++j) {
    const T tau = tau_lo + (tau_hi - tau_lo) * T(j) / T(n_frames - 1);
    frames[j].tau = tau;
    frames[j].s = std::exp(-tau);
    frames[j].U = U0;
    for (std::size_t k = 0; k < modes.size(); ++k) {
      const T amp = amplitudes[k] * std::exp(rates[k] * tau);
      for (std::size_t i = 0; i < rho.size(); ++i) frames[j].U[i] += amp * modes[k][i];
    }
  }
  return frames;
}

}  // namespace wmstab
