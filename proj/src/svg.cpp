#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "fairvec/error.hpp"

namespace fairvec::svg {

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  std::string s(buf);
  if (s == "-0.0000")
    s = "0.0000";
  return s;
}

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
    case '&':
      out += "&amp;";
      break;
    case '<':
      out += "&lt;";
      break;
    case '>':
      out += "&gt;";
      break;
    case '"':
      out += "&quot;";
      break;
    case '\'':
      out += "&apos;";
      break;
    default:
      out += c;
    }
  }
  return out;
}

std::string diverging_color(double value) {
  struct Rgb {
    double r, g, b;
  };
  constexpr Rgb male{33, 102, 172}, neutral{247, 247, 247}, female{178, 24, 43};
  const double t = std::clamp(std::isfinite(value) ? value : 0.0, -1.0, 1.0);
  const Rgb &end = t < 0 ? male : female;
  const double f = std::abs(t);
  auto mix = [&](double a, double b) { return static_cast<int>(std::lround(a + (b - a) * f)); };
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", mix(neutral.r, end.r), mix(neutral.g, end.g), mix(neutral.b, end.b));
  return buf;
}

Document::Document(int width, int height, std::string_view title) : width_(width), height_(height) {
  body_ += "<title>" + escape(title) + "</title>\n";
  body_ += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(width) + "\" height=\"" + std::to_string(height) +
           "\" fill=\"#ffffff\"/>\n";
}

void Document::rect(double x, double y, double w, double h, std::string_view fill, std::string_view stroke,
                    std::string_view tooltip) {
  body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
           "\" fill=\"" + std::string(fill) + "\" stroke=\"" + std::string(stroke) + "\"";
  if (tooltip.empty())
    body_ += "/>\n";
  else
    body_ += "><title>" + escape(tooltip) + "</title></rect>\n";
}

void Document::line(double x1, double y1, double x2, double y2, std::string_view stroke, double width, bool dashed) {
  body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) +
           "\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"" + num(width) + "\"";
  if (dashed)
    body_ += " stroke-dasharray=\"4 3\"";
  body_ += "/>\n";
}

void Document::circle(double cx, double cy, double r, std::string_view fill, std::string_view tooltip) {
  body_ += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\" fill=\"" + std::string(fill) +
           "\" stroke=\"#333333\" stroke-width=\"0.5000\"";
  if (tooltip.empty())
    body_ += "/>\n";
  else
    body_ += "><title>" + escape(tooltip) + "</title></circle>\n";
}

void Document::text(double x, double y, std::string_view content, double size, std::string_view anchor,
                    std::string_view fill) {
  body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"" + num(size) +
           "\" text-anchor=\"" + std::string(anchor) + "\" fill=\"" + std::string(fill) + "\">" + escape(content) +
           "</text>\n";
}

std::string Document::str() const {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(width_) +
         "\" height=\"" + std::to_string(height_) + "\" viewBox=\"0 0 " + std::to_string(width_) + " " +
         std::to_string(height_) + "\">\n";
  out += body_;
  out += "</svg>\n";
  return out;
}

void Document::save(const std::filesystem::path &path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open '" + path.string() + "' for writing");
  const auto s = str();
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
  if (!out)
    throw IoError("write failure on '" + path.string() + "'");
}

} // namespace fairvec::svg
