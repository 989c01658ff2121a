#ifndef DSTAB_CSV_HPP
#define DSTAB_CSV_HPP

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dstab/flatness.hpp"
#include "dstab/lyapunov.hpp"
#include "dstab/report.hpp"
#include "dstab/trajectory.hpp"

namespace dstab {

// IEEE-754 round-trip decimal formatting (17 significant digits).
inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string trajectory_csv(const Trajectory& t, std::size_t dim) {
  std::ostringstream os;
  os << "k,t,alpha";
  for (std::size_t i = 1; i <= dim; ++i) os << ",x" << i;
  os << ",f,g\n";
  for (std::size_t r = 0; r < t.points.size(); ++r) {
    os << t.ks[r] << ',' << fmt_double(t.times[r]) << ','
       << fmt_double(r < t.alphas.size() ? t.alphas[r] : 0.0);
    for (double x : t.points[r]) os << ',' << fmt_double(x);
    os << ',' << fmt_double(t.f_values[r]) << ','
       << fmt_double(r < t.g_values.size() ? t.g_values[r] : kInf) << '\n';
  }
  return os.str();
}

inline Trajectory parse_trajectory_csv(const std::string& csv, std::size_t dim) {
  Trajectory t;
  std::istringstream is(csv);
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("trajectory csv: empty");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != dim + 5) throw std::runtime_error("trajectory csv: bad row");
    t.ks.push_back(std::strtoll(cells[0].c_str(), nullptr, 10));
    t.times.push_back(std::strtod(cells[1].c_str(), nullptr));
    t.alphas.push_back(std::strtod(cells[2].c_str(), nullptr));
    Vec x(dim);
    for (std::size_t i = 0; i < dim; ++i) x[i] = std::strtod(cells[3 + i].c_str(), nullptr);
    t.points.push_back(std::move(x));
    t.f_values.push_back(std::strtod(cells[3 + dim].c_str(), nullptr));
    t.g_values.push_back(std::strtod(cells[4 + dim].c_str(), nullptr));
  }
  return t;
}

// Re-emission of a parsed trajectory; byte-identical to the original file.
inline std::string reemit_trajectory_csv(const Trajectory& t, std::size_t dim) {
  std::ostringstream os;
  os << "k,t,alpha";
  for (std::size_t i = 1; i <= dim; ++i) os << ",x" << i;
  os << ",f,g\n";
  for (std::size_t r = 0; r < t.points.size(); ++r) {
    os << t.ks[r] << ',' << fmt_double(t.times[r]) << ',' << fmt_double(t.alphas[r]);
    for (double x : t.points[r]) os << ',' << fmt_double(x);
    os << ',' << fmt_double(t.f_values[r]) << ',' << fmt_double(t.g_values[r]) << '\n';
  }
  return os.str();
}

inline std::string certificate_csv_header() {
  return "check,region,p,q,omega,alpha_bar,n_trials,worst_margin,verdict\n";
}

inline std::string certificate_csv_row(const std::string& check, const DecreaseCertificate& c) {
  std::ostringstream os;
  os << check << ',' << c.region_name << ',' << fmt_double(c.p) << ',' << c.q << ','
     << fmt_double(c.omega) << ',' << fmt_double(c.alpha_bar) << ',' << c.report.stats.trials << ','
     << fmt_double(c.report.worst_margin) << ',' << to_string(c.report.verdict) << '\n';
  return os.str();
}

inline std::string certificate_csv_row(const std::string& check, const std::string& region,
                                       const ProbeReport& rep) {
  std::ostringstream os;
  os << check << ',' << region << ",,,,," << rep.stats.trials << ','
     << fmt_double(rep.worst_margin) << ',' << to_string(rep.verdict) << '\n';
  return os.str();
}

inline std::string probe_csv_header() {
  return "probe,target,epsilon,delta,alpha_bar,p,n_trials,worst_excursion,hit_rate,verdict\n";
}

inline std::string probe_csv_row(const std::string& probe, const std::string& target,
                                 const ProbeReport& rep) {
  auto param = [&rep](const std::string& k) -> std::string {
    auto it = rep.stats.params.find(k);
    return it == rep.stats.params.end() ? std::string{} : fmt_double(it->second);
  };
  std::string tgt = target;  // cell-safe
  for (auto& c : tgt)
    if (c == ',') c = ';';
  std::ostringstream os;
  os << probe << ',' << tgt << ',' << param("epsilon") << ',' << param("delta") << ','
     << param("alpha_bar") << ',' << param("p") << ',' << rep.stats.trials << ','
     << fmt_double(rep.worst_margin) << ',' << param("hit_rate") << ','
     << to_string(rep.verdict) << '\n';
  return os.str();
}

inline std::string profile_csv(const FlatnessProfile& p) {
  std::ostringstream os;
  for (std::size_t i = 1; i <= p.center.size(); ++i) os << "center_x" << i << ',';
  os << "r,f_ring\n";
  for (std::size_t i = 0; i < p.radii.size(); ++i) {
    for (double c : p.center) os << fmt_double(c) << ',';
    os << fmt_double(p.radii[i]) << ',' << fmt_double(p.values[i]) << '\n';
  }
  return os.str();
}

inline std::string ranking_csv(const FlatRanking& r) {
  std::ostringstream os;
  os << "rank,center,profile_at_rmin\n";
  for (std::size_t i = 0; i < r.entries.size(); ++i) {
    os << (i + 1) << ',';
    const auto& c = r.entries[i].center;
    for (std::size_t j = 0; j < c.size(); ++j) os << (j ? ";" : "") << fmt_double(c[j]);
    os << ',' << fmt_double(r.entries[i].profile_at_rmin) << '\n';
  }
  return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace dstab

#endif  // DSTAB_CSV_HPP
