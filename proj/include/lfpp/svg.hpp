#pragma once

#include <string>
#include <utility>
#include <vector>

// Deterministic SVG figures. Every figure embeds a <metadata> JSON block with
// the full-precision sample values of each curve, so plots are machine
// checkable without re-deriving pixel coordinates.

namespace lfpp::svg {

struct Curve {
    std::string label;
    std::string color;
    bool dashed = false;
    std::vector<std::pair<double, double>> points;
};

struct OverlayPoint {
    double x = 0;
    double y = 0;
    double err = 0;  // half-height of the error bar; 0 draws none
    std::string color = "#2c3e50";
};

struct VLine {
    double x = 0;
    std::string color = "#c0392b";
    bool dashed = true;
    std::string label;
};

struct Figure {
    std::string id;
    std::string title;
    std::string xlabel;
    std::string ylabel;
    std::vector<Curve> curves;
    std::vector<OverlayPoint> overlays;
    std::vector<VLine> vlines;
    std::vector<std::string> notes;
};

std::string render_svg(const Figure& fig);

// Builders sample each analytic curve at 512 uniform abscissae plus the
// landmark values of the range (knots, reference points), so rows at the
// landmarks are exact.
Figure figure_lambda_bounds(double xi_min, double xi_max,
                            const std::vector<OverlayPoint>& overlays);
Figure figure_d_bounds(double gamma_min, double gamma_max,
                       const std::vector<std::pair<double, double>>& prev_lower,
                       const std::vector<std::pair<double, double>>& prev_upper);
Figure figure_g_bound(double xi_min, double xi_max, const std::vector<OverlayPoint>& overlays);

}  // namespace lfpp::svg
