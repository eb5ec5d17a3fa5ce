#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "geodesy/geometry.hpp"

namespace geodesy {

/// Minimal SVG 1.1 writer over a world-coordinate window (y up). Numbers are
/// printed with fixed precision so output is byte-stable.
class SvgCanvas {
public:
    SvgCanvas(double x0, double y0, double x1, double y1, int pixels = 640);

    void rect(double x0, double y0, double x1, double y1, const std::string& fill);
    void line(const PlanarPoint& a, const PlanarPoint& b, const std::string& stroke, double width = 1.5,
              bool dashed = false);
    void polygon(const std::vector<PlanarPoint>& pts, const std::string& stroke, const std::string& fill,
                 double width = 1.5);
    void circle(const PlanarPoint& centre, double radius, const std::string& stroke, bool dashed = false);
    void dot(const PlanarPoint& p, const std::string& fill, double radius_px = 4.0);
    void label(const PlanarPoint& p, const std::string& text, const std::string& fill);

    std::string finish();

private:
    std::string px(double v) const;
    double sx(double x) const;
    double sy(double y) const;

    double x0_, y0_, scale_;
    int width_, height_;
    std::ostringstream body_;
};

}  // namespace geodesy
