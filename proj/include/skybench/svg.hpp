#pragma once

#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace skybench::svg {

std::string escape(std::string_view text);

/// Minimal SVG 1.1 document builder. Coordinates are in user units with the
/// origin at the top-left, as in the SVG viewport.
class Document {
 public:
  Document(double width, double height);

  void rect(double x, double y, double w, double h, std::string_view fill,
            std::string_view stroke = "none", double opacity = 1.0);
  void line(double x1, double y1, double x2, double y2, std::string_view stroke, double width = 1.0);
  void polyline(const std::vector<std::pair<double, double>>& points, std::string_view stroke,
                double width = 1.0);
  void circle(double cx, double cy, double r, std::string_view fill);
  void text(double x, double y, std::string_view content, double size = 12.0,
            std::string_view anchor = "start");
  /// Adds a <title> child right after the root element.
  void title(std::string_view content);

  std::string str() const;
  void save(const std::string& path) const;

 private:
  double width_;
  double height_;
  std::string title_;
  std::ostringstream body_;
};

}  // namespace skybench::svg
