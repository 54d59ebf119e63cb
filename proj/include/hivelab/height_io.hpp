#pragma once
// JSON boundary paths for mesh domains and CSV grids for height data.

#include <sstream>
#include <string>

#include "hivelab/height.hpp"
#include "json.hpp"

namespace hivelab {

// Loops with interior on the left: the outer one is the single loop of
// positive signed area, holes are the rest.
inline nlohmann::json domain_json(const domain_t& d) {
  nlohmann::json outer, holes = nlohmann::json::array();
  const auto path = [](const std::vector<lattice_pt>& loop) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& p : loop) out.push_back({p.x, p.y});
    return out;
  };
  bool found = false;
  for (const auto& loop : boundary_loops(d)) {
    if (detail::loop_signed_area(loop) > 0) {
      if (found) throw std::invalid_argument("domain_json: domain is disconnected");
      outer = path(loop);
      found = true;
    } else {
      holes.push_back(path(loop));
    }
  }
  if (!found) throw std::invalid_argument("domain_json: no outer boundary");
  return nlohmann::json{{"outer", outer}, {"holes", holes}};
}

inline domain_t domain_from_json(const nlohmann::json& j) {
  const auto path = [](const nlohmann::json& arr) {
    std::vector<lattice_pt> loop;
    for (const auto& p : arr) loop.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
    return loop;
  };
  std::vector<std::vector<lattice_pt>> holes;
  if (j.contains("holes"))
    for (const auto& h : j.at("holes")) holes.push_back(path(h));
  return domain_from_boundary(path(j.at("outer")), holes);
}

// Grid over the bounding box, one line per y from the top down, blanks off
// the domain; same layout as the hive tables.
inline std::string height_csv(const domain_t& d, const height_values& f) {
  std::ostringstream os;
  for (int y = d.y0 + d.h; y >= d.y0; --y) {
    for (int x = d.x0; x <= d.x0 + d.w; ++x) {
      if (x > d.x0) os << ',';
      const auto it = f.find({x, y});
      if (it != f.end()) os << it->second;
    }
    os << '\n';
  }
  return os.str();
}

// Upper grid, blank line, lower grid.
inline std::string height_pair_csv(const height_pair_t& f) {
  std::ostringstream os;
  const auto grid = [&](bool upper) {
    for (int y = f.n; y >= 0; --y) {
      for (int x = 0; x <= f.n; ++x) {
        if (x > 0) os << ',';
        if (upper ? f.has_up(x, y) : f.has_lo(x, y))
          os << (upper ? f.up_at(x, y) : f.lo_at(x, y));
      }
      os << '\n';
    }
  };
  grid(true);
  os << '\n';
  grid(false);
  return os.str();
}

}  // namespace hivelab
