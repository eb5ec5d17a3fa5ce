#include "geodesy/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace geodesy {

SvgCanvas::SvgCanvas(double x0, double y0, double x1, double y1, int pixels) : x0_(x0), y0_(y1) {
    const double w = std::max(x1 - x0, 1e-12), h = std::max(y1 - y0, 1e-12);
    scale_ = pixels / std::max(w, h);
    width_ = static_cast<int>(std::ceil(w * scale_));
    height_ = static_cast<int>(std::ceil(h * scale_));
}

std::string SvgCanvas::px(double v) const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

double SvgCanvas::sx(double x) const { return (x - x0_) * scale_; }
double SvgCanvas::sy(double y) const { return (y0_ - y) * scale_; }

void SvgCanvas::rect(double x0, double y0, double x1, double y1, const std::string& fill) {
    body_ << "<rect x=\"" << px(sx(x0)) << "\" y=\"" << px(sy(y1)) << "\" width=\"" << px((x1 - x0) * scale_)
          << "\" height=\"" << px((y1 - y0) * scale_) << "\" fill=\"" << fill << "\"/>\n";
}

void SvgCanvas::line(const PlanarPoint& a, const PlanarPoint& b, const std::string& stroke, double width,
                     bool dashed) {
    body_ << "<line x1=\"" << px(sx(a.x)) << "\" y1=\"" << px(sy(a.y)) << "\" x2=\"" << px(sx(b.x)) << "\" y2=\""
          << px(sy(b.y)) << "\" stroke=\"" << stroke << "\" stroke-width=\"" << px(width) << "\""
          << (dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
}

void SvgCanvas::polygon(const std::vector<PlanarPoint>& pts, const std::string& stroke, const std::string& fill,
                        double width) {
    body_ << "<polygon points=\"";
    for (std::size_t k = 0; k < pts.size(); ++k) body_ << (k ? " " : "") << px(sx(pts[k].x)) << "," << px(sy(pts[k].y));
    body_ << "\" stroke=\"" << stroke << "\" fill=\"" << fill << "\" stroke-width=\"" << px(width) << "\"/>\n";
}

void SvgCanvas::circle(const PlanarPoint& centre, double radius, const std::string& stroke, bool dashed) {
    body_ << "<circle cx=\"" << px(sx(centre.x)) << "\" cy=\"" << px(sy(centre.y)) << "\" r=\""
          << px(radius * scale_) << "\" stroke=\"" << stroke << "\" fill=\"none\" stroke-width=\"1.2\""
          << (dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
}

void SvgCanvas::dot(const PlanarPoint& p, const std::string& fill, double radius_px) {
    body_ << "<circle cx=\"" << px(sx(p.x)) << "\" cy=\"" << px(sy(p.y)) << "\" r=\"" << px(radius_px)
          << "\" fill=\"" << fill << "\"/>\n";
}

void SvgCanvas::label(const PlanarPoint& p, const std::string& text, const std::string& fill) {
    body_ << "<text x=\"" << px(sx(p.x) + 6.0) << "\" y=\"" << px(sy(p.y) - 6.0)
          << "\" font-family=\"sans-serif\" font-size=\"13\" fill=\"" << fill << "\">" << text << "</text>\n";
}

std::string SvgCanvas::finish() {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width_ << "\" height=\""
        << height_ << "\" viewBox=\"0 0 " << width_ << " " << height_ << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body_.str() << "</svg>\n";
    return out.str();
}

}  // namespace geodesy
