#include "pwc/svg.hpp"

#include <sstream>

namespace pwc {

namespace {

constexpr int kSize = 1000;
constexpr int kMargin = 40;

const char* kPalette[] = {"#1b6ca8", "#c0392b", "#1e8449", "#b7950b", "#7d3c98",
                          "#148f77", "#a04000", "#5d6d7e", "#884ea0", "#2e86c1"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

/// Exact fixed-point pixel coordinate: value in [0,1] to the drawing area,
/// three decimals, computed in integer arithmetic.
std::string px(const Rational& v, bool flip = false) {
  Rational scaled = (flip ? 1 - v : v) * (kSize - 2 * kMargin) + kMargin;
  Integer milli = numerator(scaled * 1000) / denominator(scaled * 1000);
  std::ostringstream out;
  out << milli / 1000 << '.';
  long frac = static_cast<long>(milli % 1000);
  out << frac / 100 << (frac / 10) % 10 << frac % 10;
  return out.str();
}

std::string header() {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" viewBox=\"0 0 " << kSize << " " << kSize << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" fill=\"#ffffff\"/>\n"
      << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kSize - 2 * kMargin
      << "\" height=\"" << kSize - 2 * kMargin
      << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  return out.str();
}

void line(std::ostringstream& out, const std::string& x1, const std::string& y1,
          const std::string& x2, const std::string& y2, const char* color, int width) {
  out << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2
      << "\" stroke=\"" << color << "\" stroke-width=\"" << width << "\"/>\n";
}

void endpoint_marker(std::ostringstream& out, const Rational& x, const Rational& y, bool owned,
                     const char* color) {
  out << "<circle cx=\"" << px(x) << "\" cy=\"" << px(y, true) << "\" r=\"6\" fill=\""
      << (owned ? color : "#ffffff") << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
}

void graph_body(std::ostringstream& out, const PiecewiseAffineContraction& map) {
  for (std::size_t i = 0; i < map.piece_count(); ++i) {
    const auto& p = map.pieces()[i];
    const char* color = kPalette[i % kPaletteSize];
    Rational ylo = p.apply(p.domain.lo);
    Rational yhi = p.apply(p.domain.hi);
    line(out, px(p.domain.lo), px(ylo, true), px(p.domain.hi), px(yhi, true), color, 3);
    endpoint_marker(out, p.domain.lo, ylo, p.domain.lo_closed, color);
    endpoint_marker(out, p.domain.hi, yhi, p.domain.hi_closed, color);
  }
}

/// Width of a span of the given length, in the same scale as px().
std::string span(const Rational& length) {
  Rational scaled = length * (kSize - 2 * kMargin);
  Integer milli = numerator(scaled * 1000) / denominator(scaled * 1000);
  std::ostringstream out;
  out << milli / 1000 << '.';
  long frac = static_cast<long>(milli % 1000);
  out << frac / 100 << (frac / 10) % 10 << frac % 10;
  return out.str();
}

std::string band_y(std::size_t row, std::size_t rows) {
  // evenly spaced horizontal bands inside the drawing area
  Rational t(static_cast<long>(row), static_cast<long>(rows));
  return px(t, true);
}

}  // namespace

std::string svg_graph(const PiecewiseAffineContraction& map) {
  std::ostringstream out;
  out << header();
  line(out, px(Rational(0)), px(Rational(0), true), px(Rational(1)), px(Rational(1), true),
       "#bbbbbb", 1);
  graph_body(out, map);
  out << "</svg>\n";
  return out.str();
}

std::string svg_cobweb(const PiecewiseAffineContraction& map, const Rational& x0,
                       std::size_t steps) {
  std::ostringstream out;
  out << header();
  line(out, px(Rational(0)), px(Rational(0), true), px(Rational(1)), px(Rational(1), true),
       "#bbbbbb", 1);
  graph_body(out, map);
  auto orbit = map.orbit(x0, steps);
  for (std::size_t i = 0; i + 1 < orbit.size(); ++i) {
    // vertical to the graph, then horizontal to the diagonal
    line(out, px(orbit[i]), px(i == 0 ? Rational(0) : orbit[i], true), px(orbit[i]),
         px(orbit[i + 1], true), "#222222", 1);
    line(out, px(orbit[i]), px(orbit[i + 1], true), px(orbit[i + 1]), px(orbit[i + 1], true),
         "#222222", 1);
  }
  out << "</svg>\n";
  return out.str();
}

std::string svg_basins(const Decomposition& dec) {
  std::ostringstream out;
  out << header();
  out << "<pattern id=\"hatch\" width=\"8\" height=\"8\" patternUnits=\"userSpaceOnUse\">"
      << "<path d=\"M0,8 L8,0\" stroke=\"#555555\" stroke-width=\"2\"/></pattern>\n";
  const std::string y = "400";
  const std::string h = "200";
  for (std::size_t i = 0; i < dec.manifolds.size(); ++i)
    for (const auto& comp : dec.manifolds[i].open_intervals)
      out << "<rect x=\"" << px(comp.lo) << "\" y=\"" << y << "\" width=\""
          << span(comp.length()) << "\" height=\"" << h << "\" fill=\""
          << kPalette[i % kPaletteSize] << "\"/>\n";
  for (const auto& comp : dec.residual)
    out << "<rect x=\"" << px(comp.lo) << "\" y=\"" << y << "\" width=\"" << span(comp.length())
        << "\" height=\"" << h << "\" fill=\"url(#hatch)\"/>\n";
  out << "</svg>\n";
  return out.str();
}

std::string svg_gaps(const GapAtlas& atlas) {
  std::ostringstream out;
  out << header();
  const std::size_t rows = atlas.depth + 2;
  for (std::size_t j = 0; j < atlas.layers.size(); ++j)
    for (std::size_t l = 0; l < atlas.layers[j].size(); ++l) {
      const auto& J = atlas.layers[j][l].interval;
      out << "<rect x=\"" << px(J.lo) << "\" y=\"" << band_y(l + 1, rows) << "\" width=\""
          << span(J.length()) << "\" height=\"" << (kSize - 2 * kMargin) / rows << "\" fill=\""
          << kPalette[j % kPaletteSize] << "\"/>\n";
    }
  out << "</svg>\n";
  return out.str();
}

}  // namespace pwc
