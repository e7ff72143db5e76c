#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace fairvec::svg {

// Fixed 4-decimal formatting; negative zero prints as 0.0000.
std::string num(double x);
std::string escape(std::string_view text);
// Diverging blue-grey-red scale over [-1, 1] (male-negative, female-positive).
std::string diverging_color(double value);

// Append-only SVG 1.1 document builder with deterministic output.
class Document {
public:
  Document(int width, int height, std::string_view title);

  void rect(double x, double y, double w, double h, std::string_view fill, std::string_view stroke = "none",
            std::string_view tooltip = {});
  void line(double x1, double y1, double x2, double y2, std::string_view stroke, double width = 1.0,
            bool dashed = false);
  void circle(double cx, double cy, double r, std::string_view fill, std::string_view tooltip = {});
  void text(double x, double y, std::string_view content, double size, std::string_view anchor = "start",
            std::string_view fill = "#222222");

  std::string str() const;
  // Writes the document; throws IoError.
  void save(const std::filesystem::path &path) const;

private:
  int width_, height_;
  std::string body_;
};

} // namespace fairvec::svg
