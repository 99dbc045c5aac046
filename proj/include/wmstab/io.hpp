#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wmstab/eigensolver.hpp"
#include "wmstab/similarity.hpp"
#include "wmstab/wave_sim.hpp"

namespace wmstab {

inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path().string());
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

inline const char* ratio_class_name(RatioClass c) {
  switch (c) {
    case RatioClass::minimal: return "minimal";
    case RatioClass::dominant: return "dominant";
    default: return "inconclusive";
  }
}

template <class T>
std::string eigen_records_csv(const std::vector<EigenRecord<T>>& recs) {
  std::string out = "index,lambda,residual,method,iterations\n";
  for (std::size_t i = 0; i < recs.size(); ++i) {
    out += std::to_string(i) + "," + fmt_g17(double(recs[i].lambda.real()));
    if (std::abs(recs[i].lambda.imag()) > 0)
      out += "+" + fmt_g17(double(recs[i].lambda.imag())) + "i";
    out += "," + fmt_g17(double(recs[i].residual)) + "," + recs[i].method + "," +
           std::to_string(recs[i].iterations) + "\n";
  }
  return out;
}

template <class T>
nlohmann::json eigen_records_json(const std::vector<EigenRecord<T>>& recs) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto& r = recs[i];
    nlohmann::json j;
    j["index"] = i;
    j["lambda_re"] = double(r.lambda.real());
    j["lambda_im"] = double(r.lambda.imag());
    j["residual"] = double(r.residual);
    j["method"] = r.method;
    j["iterations"] = r.iterations;
    j["bracket"] = {double(r.bracket_lo), double(r.bracket_hi)};
    j["ratio_class"] = ratio_class_name(r.ratio_class);
    j["ratio_plateau"] = double(r.ratio_plateau);
    j["ratio_terminating"] = r.ratio_terminating;
    arr.push_back(j);
  }
  return arr;
}

template <class T>
std::string trajectory_csv(const Trajectory<T>& traj, std::size_t node_stride = 1) {
  std::string out = "t";
  const auto& first = traj.snapshots.front();
  for (std::size_t i = 0; i < first.n(); i += node_stride)
    out += ",u_r" + fmt_g17(double(first.h * T(i)));
  out += "\n";
  for (const auto& s : traj.snapshots) {
    out += fmt_g17(double(s.t));
    for (std::size_t i = 0; i < s.n(); i += node_stride) out += "," + fmt_g17(double(s.u[i]));
    out += "\n";
  }
  return out;
}

template <class T>
std::string history_csv(const std::vector<std::pair<T, T>>& hist, const std::string& a,
                        const std::string& b) {
  std::string out = a + "," + b + "\n";
  for (const auto& [x, y] : hist) out += fmt_g17(double(x)) + "," + fmt_g17(double(y)) + "\n";
  return out;
}

template <class T>
std::string frames_csv(const std::vector<SimilarityFrame<T>>& frames,
                       const std::vector<T>& rho) {
  std::string out = "tau";
  for (const auto r : rho) out += ",rho" + fmt_g17(double(r));
  out += "\n";
  for (const auto& f : frames) {
    out += fmt_g17(double(f.tau));
    for (const auto v : f.U) out += "," + fmt_g17(double(v));
    out += "\n";
  }
  return out;
}

// per-frame comparison of the measured deviation against the fitted
// least-damped mode, c1 e^{lambda1 tau} phi(rho)
template <class T>
std::string figure_csv(const SimilarityFrame<T>& frame, const std::vector<T>& rho,
                       const std::vector<T>& phi, T c1, T lambda1) {
  const auto U0 = attractor_profile(rho);
  std::string out = "rho,deviation,mode_prediction\n";
  const T amp = c1 * std::exp(lambda1 * frame.tau);
  for (std::size_t i = 0; i < rho.size(); ++i)
    out += fmt_g17(double(rho[i])) + "," + fmt_g17(double(frame.U[i] - U0[i])) + "," +
           fmt_g17(double(amp * phi[i])) + "\n";
  return out;
}

}  // namespace wmstab
