#pragma once
// JSON round-trip for patterns and hives, CSV grid dump for hive heatmaps.

#include <sstream>
#include <string>

#include "hivelab/hive.hpp"
#include "json.hpp"

namespace hivelab {

inline nlohmann::json gt_json(const gt_pattern& g) {
  return nlohmann::json{{"n", g.n()}, {"rows", g.rows}};
}

inline gt_pattern gt_from_json(const nlohmann::json& j) {
  gt_pattern g;
  g.rows = j.at("rows").get<std::vector<std::vector<double>>>();
  if (j.at("n").get<int>() != g.n())
    throw std::invalid_argument("gt_from_json: n does not match the row count");
  return g;
}

// rows keyed by y, each holding h(0,y) .. h(y,y)
inline nlohmann::json hive_json(const hive_t& h) {
  std::vector<std::vector<double>> rows(std::size_t(h.n) + 1);
  for (int y = 0; y <= h.n; ++y) {
    rows[std::size_t(y)].resize(std::size_t(y) + 1);
    for (int x = 0; x <= y; ++x) rows[std::size_t(y)][std::size_t(x)] = h.at(x, y);
  }
  return nlohmann::json{{"n", h.n}, {"rows", rows}};
}

inline hive_t hive_from_json(const nlohmann::json& j) {
  const auto rows = j.at("rows").get<std::vector<std::vector<double>>>();
  const int n = j.at("n").get<int>();
  if (int(rows.size()) != n + 1)
    throw std::invalid_argument("hive_from_json: need n+1 rows");
  hive_t h = make_hive(n);
  for (int y = 0; y <= n; ++y) {
    if (int(rows[std::size_t(y)].size()) != y + 1)
      throw std::invalid_argument("hive_from_json: row " + std::to_string(y) +
                                  " must have " + std::to_string(y + 1) + " entries");
    for (int x = 0; x <= y; ++x) h.at(x, y) = rows[std::size_t(y)][std::size_t(x)];
  }
  return h;
}

// Rectangular grid for heatmap consumers: one line per y from n down to 0,
// columns x = 0..n, cells outside the triangle left empty.
inline std::string hive_csv(const hive_t& h) {
  std::ostringstream os;
  os.precision(17);
  for (int y = h.n; y >= 0; --y) {
    for (int x = 0; x <= h.n; ++x) {
      if (x) os << ',';
      if (x <= y) os << h.at(x, y);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace hivelab
