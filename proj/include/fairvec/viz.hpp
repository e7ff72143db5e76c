#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fairvec/embedding.hpp"
#include "fairvec/geometry.hpp"

namespace fairvec {

struct PlotItem {
  std::string label;
  double x = 0.0;
  double y = 0.0;
  double weight = 0.0;
  double color = 0.0; // cosine to the bias direction, in [-1, 1]
};

struct PlotSpec {
  std::string title;
  int width = 800;
  int height = 600;
  std::string x_label;
  std::string y_label;
  std::vector<PlotItem> items;

  // Items non-empty, coordinates and weights finite, positive canvas.
  // Throws PreconditionError.
  void validate() const;
};

struct AxisRange {
  double lo = -1.0;
  double hi = 1.0;
};

// Pure renderers; output is a deterministic SVG 1.1 document.
std::string render_scatter(const PlotSpec &spec, AxisRange x, AxisRange y);
std::string render_bars(const PlotSpec &spec);
std::string render_cloud(const PlotSpec &spec);

struct CloudPlacement {
  std::string word;
  double font_size = 0.0;
  double cx = 0.0, cy = 0.0;          // box centre
  double box_width = 0.0, box_height = 0.0;
};

// Deterministic word-cloud layout: weight-descending (stable) placement on
// an Archimedean spiral from the canvas centre, rejecting any position whose
// bounding box overlaps an already placed word.
std::vector<CloudPlacement> layout_cloud(const std::vector<PlotItem> &items, int width, int height);

// Neighbours of `word`: x = cos(v, g), y = cos(v, word).
std::filesystem::path neighbor_scatter(const Embedding &e, const BiasDirection &g, std::string_view word,
                                       std::size_t k, const std::filesystem::path &out);
// Signed cos(w, g) bars, sorted descending; female-positive to the right.
std::filesystem::path bias_bar(const Embedding &e, const BiasDirection &g, std::span<const std::string> words,
                               const std::filesystem::path &out);
// Words projected on their own top-2 principal components, coloured by g.
std::filesystem::path pca_scatter(const Embedding &e, std::span<const std::string> words,
                                  const std::filesystem::path &out, const BiasDirection &g);
// Font size linear in weight between 10 and 48 px.
std::filesystem::path word_cloud(const std::vector<std::pair<std::string, double>> &items,
                                 const std::filesystem::path &out);

} // namespace fairvec
