#pragma once
// JSON round-trip for spectra and minor processes, CSV dump for patches.

#include <sstream>
#include <string>

#include "hivelab/randmat.hpp"
#include "json.hpp"

namespace hivelab {

inline nlohmann::json spectrum_json(const spectrum& s) {
  return nlohmann::json{{"values", s.values}};
}

inline spectrum spectrum_from_json(const nlohmann::json& j) {
  spectrum s;
  s.values = j.at("values").get<std::vector<double>>();
  return s;
}

inline nlohmann::json minor_process_json(const minor_process_t& p) {
  return nlohmann::json{{"n", p.n},
                        {"variance_param", p.variance_param},
                        {"seed", p.seed},
                        {"rows", p.rows}};
}

inline minor_process_t minor_process_from_json(const nlohmann::json& j) {
  minor_process_t p;
  p.n = j.at("n").get<int>();
  p.variance_param = j.at("variance_param").get<double>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.rows = j.at("rows").get<std::vector<std::vector<double>>>();
  return p;
}

// grid CSV: one comment line with the window metadata, then 2m+1 rows of
// 2m+1 values; row = eigenvalue offset di, column = minor-size offset dj
inline std::string patch_csv(const patch_t& p) {
  std::ostringstream os;
  os.precision(17);
  os << "# i0=" << p.i0 << ",j0=" << p.j0 << ",m=" << p.m << ",ell=" << p.ell
     << "\n";
  const int w = 2 * p.m + 1;
  for (int r = 0; r < w; ++r) {
    for (int c = 0; c < w; ++c) os << (c ? "," : "") << p.v[std::size_t(r) * w + c];
    os << "\n";
  }
  return os.str();
}

}  // namespace hivelab
