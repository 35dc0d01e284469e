#include "lfpp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "json.hpp"
#include "lfpp/bounds.hpp"

namespace lfpp::svg {

namespace {

using nlohmann::json;

constexpr double kWidth = 860, kHeight = 560;
constexpr double kMarginL = 70, kMarginR = 24, kMarginT = 48, kMarginB = 56;

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }

    void finalize() {
        if (lo > hi) {
            lo = 0;
            hi = 1;
        }
        if (hi - lo < 1e-12) {
            lo -= 1;
            hi += 1;
        } else {
            double pad = 0.04 * (hi - lo);
            lo -= pad;
            hi += pad;
        }
    }
};

json figure_metadata(const Figure& fig) {
    json meta;
    meta["figure"] = fig.id;
    json curves = json::array();
    for (const auto& c : fig.curves) {
        json jc;
        jc["label"] = c.label;
        jc["dashed"] = c.dashed;
        json xs = json::array(), ys = json::array();
        for (auto [x, y] : c.points) {
            xs.push_back(x);
            ys.push_back(y);
        }
        jc["x"] = std::move(xs);
        jc["y"] = std::move(ys);
        curves.push_back(std::move(jc));
    }
    meta["curves"] = std::move(curves);
    json vlines = json::array();
    for (const auto& v : fig.vlines) vlines.push_back(v.x);
    meta["vlines"] = std::move(vlines);
    json overlays = json::array();
    for (const auto& o : fig.overlays) {
        json jo;
        jo["x"] = o.x;
        jo["y"] = o.y;
        jo["err"] = o.err;
        overlays.push_back(std::move(jo));
    }
    meta["overlays"] = std::move(overlays);
    meta["notes"] = fig.notes;
    return meta;
}

}  // namespace

std::string render_svg(const Figure& fig) {
    Range xr, yr;
    for (const auto& c : fig.curves)
        for (auto [x, y] : c.points) {
            xr.add(x);
            yr.add(y);
        }
    for (const auto& o : fig.overlays) {
        xr.add(o.x);
        yr.add(o.y - o.err);
        yr.add(o.y + o.err);
    }
    for (const auto& v : fig.vlines) xr.add(v.x);
    xr.finalize();
    yr.finalize();

    const double plot_w = kWidth - kMarginL - kMarginR;
    const double plot_h = kHeight - kMarginT - kMarginB;
    auto sx = [&](double x) { return kMarginL + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
    auto sy = [&](double y) { return kMarginT + (yr.hi - y) / (yr.hi - yr.lo) * plot_h; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"860\" height=\"560\" "
           "viewBox=\"0 0 860 560\" font-family=\"Helvetica, Arial, sans-serif\">\n";
    out += "<metadata id=\"lfpp-data\">";
    out += figure_metadata(fig).dump();
    out += "</metadata>\n";
    out += "<rect x=\"0\" y=\"0\" width=\"860\" height=\"560\" fill=\"#ffffff\"/>\n";
    out += "<text x=\"" + px(kWidth / 2) + "\" y=\"26\" text-anchor=\"middle\" font-size=\"16\" "
           "fill=\"#2c3e50\">" + fig.title + "</text>\n";

    // axes and ticks
    out += "<g stroke=\"#7f8c8d\" stroke-width=\"1\" fill=\"none\">\n";
    out += "<rect x=\"" + px(kMarginL) + "\" y=\"" + px(kMarginT) + "\" width=\"" + px(plot_w) +
           "\" height=\"" + px(plot_h) + "\"/>\n";
    out += "</g>\n";
    out += "<g font-size=\"11\" fill=\"#34495e\">\n";
    const int ticks = 6;
    for (int i = 0; i <= ticks; ++i) {
        double fx = xr.lo + (xr.hi - xr.lo) * i / ticks;
        double fy = yr.lo + (yr.hi - yr.lo) * i / ticks;
        out += "<line x1=\"" + px(sx(fx)) + "\" y1=\"" + px(kMarginT + plot_h) + "\" x2=\"" +
               px(sx(fx)) + "\" y2=\"" + px(kMarginT + plot_h + 5) +
               "\" stroke=\"#7f8c8d\"/>\n";
        out += "<text x=\"" + px(sx(fx)) + "\" y=\"" + px(kMarginT + plot_h + 18) +
               "\" text-anchor=\"middle\">" + short_num(fx) + "</text>\n";
        out += "<line x1=\"" + px(kMarginL - 5) + "\" y1=\"" + px(sy(fy)) + "\" x2=\"" +
               px(kMarginL) + "\" y2=\"" + px(sy(fy)) + "\" stroke=\"#7f8c8d\"/>\n";
        out += "<text x=\"" + px(kMarginL - 8) + "\" y=\"" + px(sy(fy) + 4) +
               "\" text-anchor=\"end\">" + short_num(fy) + "</text>\n";
    }
    out += "<text x=\"" + px(kMarginL + plot_w / 2) + "\" y=\"" + px(kHeight - 14) +
           "\" text-anchor=\"middle\" font-size=\"13\">" + fig.xlabel + "</text>\n";
    out += "<text x=\"18\" y=\"" + px(kMarginT + plot_h / 2) +
           "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " +
           px(kMarginT + plot_h / 2) + ")\">" + fig.ylabel + "</text>\n";
    out += "</g>\n";

    for (const auto& v : fig.vlines) {
        out += "<line x1=\"" + px(sx(v.x)) + "\" y1=\"" + px(kMarginT) + "\" x2=\"" + px(sx(v.x)) +
               "\" y2=\"" + px(kMarginT + plot_h) + "\" stroke=\"" + v.color +
               "\" stroke-width=\"1.4\"" +
               (v.dashed ? " stroke-dasharray=\"7 5\"" : "") + "/>\n";
    }

    for (const auto& c : fig.curves) {
        std::string pts;
        for (auto [x, y] : c.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if (!pts.empty()) pts += ' ';
            pts += px(sx(x)) + "," + px(sy(y));
        }
        out += "<polyline fill=\"none\" stroke=\"" + c.color + "\" stroke-width=\"1.8\"" +
               (c.dashed ? " stroke-dasharray=\"6 4\"" : "") + " points=\"" + pts + "\"/>\n";
    }

    for (const auto& o : fig.overlays) {
        if (o.err > 0) {
            out += "<line x1=\"" + px(sx(o.x)) + "\" y1=\"" + px(sy(o.y - o.err)) + "\" x2=\"" +
                   px(sx(o.x)) + "\" y2=\"" + px(sy(o.y + o.err)) + "\" stroke=\"" + o.color +
                   "\" stroke-width=\"1.2\"/>\n";
        }
        out += "<circle cx=\"" + px(sx(o.x)) + "\" cy=\"" + px(sy(o.y)) +
               "\" r=\"3.2\" fill=\"" + o.color + "\"/>\n";
    }

    // legend, top-right inside the plot
    double lx = kMarginL + plot_w - 220, ly = kMarginT + 14;
    out += "<g font-size=\"12\" fill=\"#2c3e50\">\n";
    for (const auto& c : fig.curves) {
        out += "<line x1=\"" + px(lx) + "\" y1=\"" + px(ly - 4) + "\" x2=\"" + px(lx + 26) +
               "\" y2=\"" + px(ly - 4) + "\" stroke=\"" + c.color + "\" stroke-width=\"2\"" +
               (c.dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
        out += "<text x=\"" + px(lx + 32) + "\" y=\"" + px(ly) + "\">" + c.label + "</text>\n";
        ly += 17;
    }
    for (const auto& v : fig.vlines) {
        if (v.label.empty()) continue;
        out += "<line x1=\"" + px(lx) + "\" y1=\"" + px(ly - 4) + "\" x2=\"" + px(lx + 26) +
               "\" y2=\"" + px(ly - 4) + "\" stroke=\"" + v.color +
               "\" stroke-width=\"2\" stroke-dasharray=\"7 5\"/>\n";
        out += "<text x=\"" + px(lx + 32) + "\" y=\"" + px(ly) + "\">" + v.label + "</text>\n";
        ly += 17;
    }
    out += "</g>\n";

    double ny = kHeight - 32;
    for (const auto& note : fig.notes) {
        out += "<text x=\"" + px(kMarginL) + "\" y=\"" + px(ny) +
               "\" font-size=\"11\" fill=\"#7f8c8d\">" + note + "</text>\n";
        ny += 13;
    }

    out += "</svg>\n";
    return out;
}

namespace {

// 512 uniform samples over [lo, hi] plus any landmarks inside it
std::vector<double> sample_grid(double lo, double hi, std::initializer_list<double> landmarks) {
    std::set<double> xs;
    const int n = 512;
    for (int i = 0; i < n; ++i) xs.insert(lo + (hi - lo) * i / (n - 1));
    for (double v : landmarks)
        if (v >= lo && v <= hi) xs.insert(v);
    return {xs.begin(), xs.end()};
}

constexpr const char* kRed = "#c0392b";
constexpr const char* kBlue = "#2980b9";
constexpr const char* kGreen = "#27ae60";
constexpr const char* kOrange = "#e67e22";

}  // namespace

Figure figure_lambda_bounds(double xi_min, double xi_max,
                            const std::vector<OverlayPoint>& overlays) {
    Figure fig;
    fig.id = "lambda_bounds";
    fig.title = "Distance exponent bounds";
    fig.xlabel = "xi";
    fig.ylabel = "lambda";
    double ref = 2.0 - std::sqrt(2.5);
    auto xs = sample_grid(xi_min, xi_max,
                          {bounds::xi_knot(), 1.0 / std::sqrt(3.0), 1.0, ref});
    Curve lower{"lower bound", kRed, false, {}};
    Curve upper{"upper bound", kBlue, false, {}};
    Curve wat{"extended Watabiki", kGreen, false, {}};
    Curve dg{"DG prediction", kOrange, false, {}};
    for (double x : xs) {
        lower.points.emplace_back(x, bounds::lambda_lower(x));
        upper.points.emplace_back(x, bounds::lambda_upper(x));
        wat.points.emplace_back(x, bounds::watabiki_lambda_ext(x));
        dg.points.emplace_back(x, bounds::dg_guess_lambda(x));
    }
    fig.curves = {lower, upper, wat, dg};
    fig.vlines.push_back({ref, kRed, true, "2 - sqrt(5/2)"});
    fig.overlays = overlays;
    return fig;
}

Figure figure_d_bounds(double gamma_min, double gamma_max,
                       const std::vector<std::pair<double, double>>& prev_lower,
                       const std::vector<std::pair<double, double>>& prev_upper) {
    Figure fig;
    fig.id = "d_bounds";
    fig.title = "LQG dimension bounds";
    fig.xlabel = "gamma";
    fig.ylabel = "d";
    auto xs = sample_grid(gamma_min, gamma_max, {bounds::gamma_knot(), std::sqrt(2.0)});
    Curve lower{"lower bound", kRed, false, {}};
    Curve upper{"upper bound", kBlue, false, {}};
    Curve wat{"Watabiki", kGreen, false, {}};
    Curve dg{"DG prediction", kOrange, false, {}};
    for (double x : xs) {
        if (x <= 0) continue;
        lower.points.emplace_back(x, bounds::d_lower(x));
        upper.points.emplace_back(x, bounds::d_upper(x));
        wat.points.emplace_back(x, bounds::watabiki_d(x));
        dg.points.emplace_back(x, bounds::dg_guess_d(x));
    }
    fig.curves = {lower, upper, wat, dg};
    if (!prev_lower.empty()) fig.curves.push_back({"previous lower", kRed, true, prev_lower});
    if (!prev_upper.empty()) fig.curves.push_back({"previous upper", kBlue, true, prev_upper});
    if (prev_lower.empty() && prev_upper.empty())
        fig.notes.push_back("previous-best bound overlays omitted: no curves supplied in config");
    return fig;
}

Figure figure_g_bound(double xi_min, double xi_max, const std::vector<OverlayPoint>& overlays) {
    Figure fig;
    fig.id = "g_bound";
    fig.title = "Geodesic dimension upper bound";
    fig.xlabel = "xi";
    fig.ylabel = "g";
    double ref = 2.0 - std::sqrt(2.5);
    auto xs = sample_grid(xi_min, xi_max, {bounds::xi_knot(), ref});
    Curve g{"upper bound at the lower lambda bound", kBlue, false, {}};
    for (double x : xs) {
        double lam = bounds::lambda_lower(x);
        g.points.emplace_back(x, bounds::g_upper(x, lam));
    }
    fig.curves = {g};
    fig.vlines.push_back({ref, kRed, true, "2 - sqrt(5/2)"});
    fig.overlays = overlays;
    return fig;
}

}  // namespace lfpp::svg
