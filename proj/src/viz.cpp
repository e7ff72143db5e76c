#include "fairvec/viz.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "fairvec/error.hpp"
#include "fairvec/numerics.hpp"
#include "fairvec/vector_ops.hpp"
#include "svg.hpp"

namespace fs = std::filesystem;

namespace fairvec {

void PlotSpec::validate() const {
  if (width <= 0 || height <= 0)
    throw PreconditionError("plot canvas must have positive size");
  if (items.empty())
    throw PreconditionError("plot '" + title + "' has no items");
  for (const auto &it : items)
    if (!std::isfinite(it.x) || !std::isfinite(it.y) || !std::isfinite(it.weight) || !std::isfinite(it.color))
      throw PreconditionError("plot item '" + it.label + "' has a non-finite value");
}

namespace {

constexpr double kLeft = 80, kRight = 30, kTop = 50, kBottom = 60;
constexpr int kTicks = 8;

struct Frame {
  double x0, y0, w, h;
  AxisRange xr, yr;
  double px(double x) const { return x0 + (x - xr.lo) / (xr.hi - xr.lo) * w; }
  double py(double y) const { return y0 + h - (y - yr.lo) / (yr.hi - yr.lo) * h; }
};

void draw_frame(svg::Document &doc, const Frame &f, const PlotSpec &spec) {
  doc.text(f.x0 + f.w / 2, kTop / 2 + 6, spec.title, 16, "middle");
  for (int i = 0; i <= kTicks; ++i) {
    const double t = static_cast<double>(i) / kTicks;
    const double xv = f.xr.lo + t * (f.xr.hi - f.xr.lo);
    const double yv = f.yr.lo + t * (f.yr.hi - f.yr.lo);
    doc.line(f.px(xv), f.y0, f.px(xv), f.y0 + f.h, "#e0e0e0");
    doc.line(f.x0, f.py(yv), f.x0 + f.w, f.py(yv), "#e0e0e0");
    doc.text(f.px(xv), f.y0 + f.h + 16, svg::num(xv).substr(0, svg::num(xv).size() - 2), 10, "middle");
    doc.text(f.x0 - 6, f.py(yv) + 3, svg::num(yv).substr(0, svg::num(yv).size() - 2), 10, "end");
  }
  doc.line(f.x0, f.y0 + f.h, f.x0 + f.w, f.y0 + f.h, "#333333");
  doc.line(f.x0, f.y0, f.x0, f.y0 + f.h, "#333333");
  if (f.xr.lo < 0 && f.xr.hi > 0)
    doc.line(f.px(0), f.y0, f.px(0), f.y0 + f.h, "#555555", 1.5, true);
  if (!spec.x_label.empty())
    doc.text(f.x0 + f.w / 2, f.y0 + f.h + 40, spec.x_label, 12, "middle");
  if (!spec.y_label.empty())
    doc.text(18, f.y0 + f.h / 2, spec.y_label, 12, "start");
}

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s)
    n += (c & 0xC0) != 0x80;
  return n;
}

fs::path write(const std::string &content, const fs::path &out) {
  std::ofstream file(out, std::ios::binary | std::ios::trunc);
  if (!file)
    throw IoError("cannot open '" + out.string() + "' for writing");
  file.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!file)
    throw IoError("write failure on '" + out.string() + "'");
  return out;
}

} // namespace

std::string render_scatter(const PlotSpec &spec, AxisRange x, AxisRange y) {
  spec.validate();
  if (!(x.hi > x.lo) || !(y.hi > y.lo))
    throw PreconditionError("scatter axis range is empty");
  svg::Document doc(spec.width, spec.height, spec.title);
  const Frame f{kLeft, kTop, spec.width - kLeft - kRight, spec.height - kTop - kBottom, x, y};
  draw_frame(doc, f, spec);
  for (const auto &it : spec.items) {
    const double px = f.px(it.x), py = f.py(it.y);
    doc.circle(px, py, 4, svg::diverging_color(it.color),
               it.label + " (x=" + svg::num(it.x) + ", y=" + svg::num(it.y) + ")");
    doc.text(px + 6, py - 6, it.label, 11);
  }
  return doc.str();
}

std::string render_bars(const PlotSpec &spec) {
  spec.validate();
  std::vector<std::size_t> order(spec.items.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return spec.items[a].x > spec.items[b].x; });
  constexpr double left = 140;
  svg::Document doc(spec.width, spec.height, spec.title);
  const double w = spec.width - left - kRight, h = spec.height - kTop - kBottom;
  const double centre = left + w / 2, half = w / 2;
  const double slot = h / static_cast<double>(order.size());
  doc.text(left + w / 2, kTop / 2 + 6, spec.title, 16, "middle");
  for (int i = 0; i <= kTicks; ++i) {
    const double v = -1.0 + 2.0 * i / kTicks;
    doc.line(centre + v * half, kTop, centre + v * half, kTop + h, "#e0e0e0");
    doc.text(centre + v * half, kTop + h + 16, svg::num(v).substr(0, svg::num(v).size() - 2), 10, "middle");
  }
  for (std::size_t r = 0; r < order.size(); ++r) {
    const auto &it = spec.items[order[r]];
    const double y = kTop + r * slot;
    const double bar = std::clamp(it.x, -1.0, 1.0) * half;
    doc.rect(bar >= 0 ? centre : centre + bar, y + slot * 0.15, std::abs(bar), slot * 0.7,
             svg::diverging_color(it.x), "none", it.label + " (value=" + svg::num(it.x) + ")");
    doc.text(left - 8, y + slot / 2 + 4, it.label, std::min(12.0, std::max(6.0, slot * 0.6)), "end");
  }
  doc.line(centre, kTop, centre, kTop + h, "#333333", 1.5);
  if (!spec.x_label.empty())
    doc.text(left + w / 2, kTop + h + 40, spec.x_label, 12, "middle");
  return doc.str();
}

std::vector<CloudPlacement> layout_cloud(const std::vector<PlotItem> &items, int width, int height) {
  double max_weight = 0.0;
  for (const auto &it : items) {
    if (!(it.weight >= 0.0))
      throw PreconditionError("word cloud weights must be non-negative");
    max_weight = std::max(max_weight, it.weight);
  }
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return items[a].weight > items[b].weight; });
  std::vector<CloudPlacement> placed;
  placed.reserve(items.size());
  auto overlaps = [&](const CloudPlacement &c) {
    for (const auto &p : placed)
      if (std::abs(c.cx - p.cx) * 2 < c.box_width + p.box_width &&
          std::abs(c.cy - p.cy) * 2 < c.box_height + p.box_height)
        return true;
    return false;
  };
  constexpr double kStep = 0.05, kSpacing = 2.0;
  for (std::size_t idx : order) {
    const auto &it = items[idx];
    CloudPlacement c;
    c.word = it.label;
    c.font_size = max_weight > 0.0 ? 10.0 + 38.0 * it.weight / max_weight : 10.0;
    c.box_width = 0.6 * c.font_size * static_cast<double>(std::max<std::size_t>(1, utf8_length(it.label)));
    c.box_height = c.font_size;
    for (double theta = 0.0;; theta += kStep) {
      const double r = kSpacing * theta;
      c.cx = width / 2.0 + r * std::cos(theta);
      c.cy = height / 2.0 + r * std::sin(theta);
      if (!overlaps(c))
        break;
    }
    placed.push_back(std::move(c));
  }
  return placed;
}

std::string render_cloud(const PlotSpec &spec) {
  spec.validate();
  svg::Document doc(spec.width, spec.height, spec.title);
  for (const auto &c : layout_cloud(spec.items, spec.width, spec.height)) {
    // Baseline sits 0.35 em below the box centre.
    doc.text(c.cx, c.cy + 0.35 * c.font_size, c.word, c.font_size, "middle", "#1f3b5a");
  }
  return doc.str();
}

fs::path neighbor_scatter(const Embedding &e, const BiasDirection &g, std::string_view word, std::size_t k,
                          const fs::path &out) {
  const auto list = knn(e, word, k);
  PlotSpec spec;
  spec.title = "Neighbours of '" + std::string(word) + "'";
  spec.x_label = "cosine to bias direction (female +)";
  spec.y_label = "cosine to word";
  for (const auto &n : list.entries) {
    const double x = cosine_to_direction(e, n.index, g);
    spec.items.push_back({n.word, x, n.cosine, 0.0, x});
  }
  if (spec.items.empty())
    throw DegenerateError("neighbour plot of '" + std::string(word) + "': no neighbours");
  return write(render_scatter(spec, {-1, 1}, {-1, 1}), out);
}

fs::path bias_bar(const Embedding &e, const BiasDirection &g, std::span<const std::string> words, const fs::path &out) {
  PlotSpec spec;
  spec.title = "Projection on the bias direction";
  spec.x_label = "cosine to bias direction (female +)";
  for (const auto &w : words)
    if (auto i = e.find(w)) {
      const double x = cosine_to_direction(e, *i, g);
      spec.items.push_back({w, x, 0.0, 0.0, x});
    }
  if (spec.items.empty())
    throw DataError("bias bar chart: every word is out of vocabulary");
  spec.height = std::max(spec.height, static_cast<int>(kTop + kBottom) + 14 * static_cast<int>(spec.items.size()));
  return write(render_bars(spec), out);
}

fs::path pca_scatter(const Embedding &e, std::span<const std::string> words, const fs::path &out,
                     const BiasDirection &g) {
  std::vector<std::size_t> rows;
  std::vector<char> seen(e.size(), 0);
  for (const auto &w : words)
    if (auto i = e.find(w); i && !seen[*i]) {
      seen[*i] = 1;
      rows.push_back(*i);
    }
  if (rows.size() < 3)
    throw DataError("PCA scatter needs at least 3 in-vocabulary words, found " + std::to_string(rows.size()));
  const std::size_t d = e.dim();
  Matrix data(rows.size(), d);
  std::vector<double> mean(d, 0.0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto v = e.row(rows[r]);
    for (std::size_t j = 0; j < d; ++j) {
      data(r, j) = v[j];
      mean[j] += v[j];
    }
  }
  for (double &m : mean)
    m /= static_cast<double>(rows.size());
  const Matrix basis = pca(data, 2);
  PlotSpec spec;
  spec.title = "Principal components";
  spec.x_label = "PC1";
  spec.y_label = "PC2";
  AxisRange xr{0, 0}, yr{0, 0};
  for (std::size_t r = 0; r < rows.size(); ++r) {
    double px = 0.0, py = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      px += (data(r, j) - mean[j]) * basis(j, 0);
      py += (data(r, j) - mean[j]) * basis(j, 1);
    }
    spec.items.push_back({e.word(rows[r]), px, py, 0.0, cosine_to_direction(e, rows[r], g)});
    xr = {std::min(xr.lo, px), std::max(xr.hi, px)};
    yr = {std::min(yr.lo, py), std::max(yr.hi, py)};
  }
  auto pad = [](AxisRange r) {
    const double span = std::max(r.hi - r.lo, 1e-9);
    return AxisRange{r.lo - 0.1 * span, r.hi + 0.1 * span};
  };
  return write(render_scatter(spec, pad(xr), pad(yr)), out);
}

fs::path word_cloud(const std::vector<std::pair<std::string, double>> &items, const fs::path &out) {
  PlotSpec spec;
  spec.title = "Word cloud";
  for (const auto &[word, weight] : items)
    spec.items.push_back({word, 0.0, 0.0, weight, 0.0});
  if (spec.items.empty())
    throw PreconditionError("word cloud needs at least one item");
  return write(render_cloud(spec), out);
}

} // namespace fairvec
