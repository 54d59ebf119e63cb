#pragma once
// JSON round-trip and SVG rendering for lozenge tilings.

#include <sstream>
#include <string>

#include "hivelab/lozenge.hpp"
#include "json.hpp"

namespace hivelab {

inline nlohmann::json tiling_json(const tiling_t& xi, const hexagon_t& h) {
  nlohmann::json loz = nlohmann::json::array();
  for (const auto& d : xi.lozenges)
    loz.push_back({{"kind", int(d.kind)}, {"x", d.x}, {"y", d.y}});
  nlohmann::json tri = nlohmann::json::array();
  for (const auto& t : xi.triangles) tri.push_back({{"upward", t.upward}, {"e", t.e}});
  return nlohmann::json{{"hexagon", {{"n", h.n}, {"v", {h.vi, h.vj}}}},
                        {"lozenges", loz},
                        {"triangles", tri}};
}

inline hexagon_t hexagon_from_json(const nlohmann::json& j) {
  const auto& hx = j.at("hexagon");
  return excavation_hexagon(hx.at("v").at(0).get<int>(), hx.at("v").at(1).get<int>(),
                            hx.at("n").get<int>());
}

inline tiling_t tiling_from_json(const nlohmann::json& j) {
  tiling_t xi;
  for (const auto& d : j.at("lozenges")) {
    const int kind = d.at("kind").get<int>();
    if (kind < 0 || kind > 2) throw std::invalid_argument("tiling_from_json: bad lozenge kind");
    xi.lozenges.push_back({loz_kind(kind), d.at("x").get<int>(), d.at("y").get<int>()});
  }
  for (const auto& t : j.at("triangles"))
    xi.triangles.push_back({t.at("upward").get<bool>(), t.at("e").get<int>()});
  return xi;
}

namespace detail {

// Triangular-lattice projection with the y axis at 120 degrees to x, flipped
// so larger y renders higher on the page.
inline void svg_point(std::ostringstream& os, int n, int x, int y) {
  const double scale = 36.0;
  const double px = scale * (double(x) + 0.5 * double(y)) + 8.0;
  const double py = scale * 0.8660254037844386 * double(n - y) + 8.0;
  os << px << ',' << py;
}

template <class Pts>
inline void svg_poly(std::ostringstream& os, int n, const Pts& pts, const char* fill) {
  os << "<polygon points=\"";
  bool first = true;
  for (const auto& p : pts) {
    if (!first) os << ' ';
    first = false;
    svg_point(os, n, p.x, p.y);
  }
  os << "\" fill=\"" << fill << "\" stroke=\"#333\" stroke-width=\"1\"/>\n";
}

}  // namespace detail

inline std::string tiling_svg(const tiling_t& xi, const hexagon_t& h) {
  const int n = h.n;
  const double scale = 36.0;
  const double wpx = scale * 1.5 * double(n) + 16.0;
  const double hpx = scale * 0.8660254037844386 * double(n) + 16.0;
  std::ostringstream os;
  os.precision(3);
  os << std::fixed;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << wpx << "\" height=\"" << hpx
     << "\">\n";
  for (const auto& d : xi.lozenges) {
    const loz_color c = color_of(d, n);
    const char* fill = c == loz_color::blue ? "#6a8fd8" : c == loz_color::red ? "#d87a6a" : "#7ab87a";
    detail::svg_poly(os, n, lozenge_corners(d), fill);
  }
  for (const auto& t : xi.triangles) detail::svg_poly(os, n, triangle_corners(t, n), "#e8e0c8");
  os << "</svg>\n";
  return os.str();
}

}  // namespace hivelab
