#include "skybench/svg.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace skybench::svg {

namespace {

// Fixed two-decimal output keeps files small and byte-stable.
std::string num(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  if (ec != std::errc{}) return "0";
  std::string s(buf, end);
  if (s == "-0.00") s = "0.00";
  return s;
}

}  // namespace

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

Document::Document(double width, double height) : width_(width), height_(height) {}

void Document::rect(double x, double y, double w, double h, std::string_view fill,
                    std::string_view stroke, double opacity) {
  body_ << "  <rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w)
        << "\" height=\"" << num(h) << "\" fill=\"" << escape(fill) << "\" stroke=\"" << escape(stroke)
        << "\"";
  if (opacity < 1.0) body_ << " fill-opacity=\"" << num(opacity) << "\"";
  body_ << "/>\n";
}

void Document::line(double x1, double y1, double x2, double y2, std::string_view stroke, double width) {
  body_ << "  <line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\""
        << num(y2) << "\" stroke=\"" << escape(stroke) << "\" stroke-width=\"" << num(width) << "\"/>\n";
}

void Document::polyline(const std::vector<std::pair<double, double>>& points, std::string_view stroke,
                        double width) {
  body_ << "  <polyline fill=\"none\" stroke=\"" << escape(stroke) << "\" stroke-width=\"" << num(width)
        << "\" points=\"";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) body_ << ' ';
    body_ << num(points[i].first) << ',' << num(points[i].second);
  }
  body_ << "\"/>\n";
}

void Document::circle(double cx, double cy, double r, std::string_view fill) {
  body_ << "  <circle cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"" << num(r) << "\" fill=\""
        << escape(fill) << "\"/>\n";
}

void Document::text(double x, double y, std::string_view content, double size, std::string_view anchor) {
  body_ << "  <text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-family=\"sans-serif\" font-size=\""
        << num(size) << "\" text-anchor=\"" << escape(anchor) << "\">" << escape(content) << "</text>\n";
}

void Document::title(std::string_view content) { title_ = std::string(content); }

std::string Document::str() const {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width_)
      << "\" height=\"" << num(height_) << "\" viewBox=\"0 0 " << num(width_) << ' ' << num(height_)
      << "\">\n";
  if (!title_.empty()) out << "  <title>" << escape(title_) << "</title>\n";
  out << body_.str() << "</svg>\n";
  return out.str();
}

void Document::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << str();
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace skybench::svg
