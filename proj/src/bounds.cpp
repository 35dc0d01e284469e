#include "lfpp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lfpp::bounds {

namespace {

constexpr double kTol = 1e-12;

void require(bool cond, const char* msg) {
    if (!cond) throw std::domain_error(msg);
}

}  // namespace

double line_slope() { return std::sqrt(5.0 / 2.0) - 1.0 / std::sqrt(6.0); }
double line_intercept() { return (std::sqrt(15.0) - 2.0) / 6.0; }
double xi_knot() { return 1.0 / std::sqrt(6.0); }
double gamma_knot() { return std::sqrt(8.0 / 3.0); }

double lambda_lower(double xi) {
    require(xi >= 0.0, "lambda_lower: xi must be nonnegative");
    if (xi <= xi_knot()) return std::max(line_slope() * xi - line_intercept(), -xi * xi / 2.0);
    return std::max(0.25 - xi * xi / 2.0, -0.5);
}

double lambda_upper(double xi) {
    require(xi >= 0.0, "lambda_upper: xi must be nonnegative");
    if (xi <= xi_knot()) return std::min(0.25 - xi * xi / 2.0, std::sqrt(2.0) * xi);
    return std::min(line_slope() * xi - line_intercept(), 1.0);
}

double watabiki_lambda_ext(double xi) {
    require(xi >= 0.0, "watabiki_lambda_ext: xi must be nonnegative");
    return std::min(xi * xi, 1.0);
}

double dg_guess_lambda(double xi) {
    require(xi >= 0.0, "dg_guess_lambda: xi must be nonnegative");
    return std::min(xi / std::sqrt(6.0), 1.0);
}

double watabiki_d(double gamma) {
    require(gamma > 0.0 && gamma <= 2.0, "watabiki_d: gamma must be in (0,2]");
    double g2 = gamma * gamma;
    return 1.0 + g2 / 4.0 + std::sqrt((4.0 + g2) * (4.0 + g2) + 16.0 * g2) / 4.0;
}

double dg_guess_d(double gamma) {
    require(gamma > 0.0 && gamma <= 2.0, "dg_guess_d: gamma must be in (0,2]");
    return 2.0 + gamma * gamma / 2.0 + gamma / std::sqrt(6.0);
}

double d_lower(double gamma) {
    require(gamma > 0.0 && gamma <= 2.0, "d_lower: gamma must be in (0,2]");
    double g2 = gamma * gamma;
    if (gamma <= gamma_knot()) {
        double linear = (12.0 - std::sqrt(6.0) * gamma + 3.0 * std::sqrt(10.0) * gamma + 3.0 * g2) /
                        (4.0 + std::sqrt(15.0));
        // 2 g^2 / (4 + g^2 - sqrt(16 + g^4)) via the conjugate; the raw form
        // cancels catastrophically as gamma -> 0.
        double conj = (4.0 + g2 + std::sqrt(16.0 + g2 * g2)) / 4.0;
        return std::max(linear, conj);
    }
    return (4.0 + g2 + std::sqrt(16.0 + 2.0 * g2 + g2 * g2)) / 3.0;
}

double d_upper(double gamma) {
    require(gamma > 0.0 && gamma <= 2.0, "d_upper: gamma must be in (0,2]");
    double g2 = gamma * gamma;
    if (gamma <= gamma_knot()) {
        return std::min((4.0 + g2 + std::sqrt(16.0 + 2.0 * g2 + g2 * g2)) / 3.0,
                        2.0 + g2 / 2.0 + std::sqrt(2.0) * gamma);
    }
    return (12.0 - std::sqrt(6.0) * gamma + 3.0 * std::sqrt(10.0) * gamma + 3.0 * g2) /
           (4.0 + std::sqrt(15.0));
}

double lambda_from_gamma(double gamma, double d) {
    require(gamma > 0.0 && gamma <= 2.0, "lambda_from_gamma: gamma must be in (0,2]");
    require(d > 0.0, "lambda_from_gamma: d must be positive");
    return 1.0 - (gamma / d) * (2.0 / gamma + gamma / 2.0);
}

double alpha_star(double xi, double lam) {
    double rad = 2.0 + 2.0 * lam + xi * xi;
    require(rad >= 0.0, "alpha_star: negative radicand");
    return std::sqrt(rad) - xi;
}

double length_compare_exponent(double xi, double xi_tilde, double lam) {
    require(xi_tilde >= 0.0 && xi_tilde <= xi, "length_compare_exponent: need 0 <= xi_tilde <= xi");
    return lam - (xi - xi_tilde) * alpha_star(xi, lam);
}

double g_upper(double xi, double lam) {
    return 1.0 - lam + xi * alpha_star(xi, lam);
}

double geodesic_gamma_bound(double gamma, double d) {
    require(gamma > 0.0 && gamma <= 2.0, "geodesic_gamma_bound: gamma must be in (0,2]");
    require(d > 0.0, "geodesic_gamma_bound: d must be positive");
    return g_upper(gamma / d, lambda_from_gamma(gamma, d));
}

double q_of(double xi, double lam) {
    require(xi > 0.0, "q_of: xi must be positive");
    return (1.0 - lam) / xi;
}

double c_of(double xi, double lam) {
    double q = q_of(xi, lam);
    return 25.0 - 6.0 * q * q;
}

std::pair<double, double> contradiction_interval() {
    double lo = std::sqrt(5.0 / 2.0) - std::sqrt(2.0 / 3.0);
    double hi = (4.0 + std::sqrt(15.0)) / (std::sqrt(2.0) * (3.0 * std::sqrt(5.0) - std::sqrt(3.0)));
    return {lo, hi};
}

double q_mono_threshold() {
    return std::sqrt(2.0 - std::sqrt(113.0 - 8.0 * std::sqrt(15.0)) / 6.0);
}

BoundsRow bounds_row(double xi) {
    BoundsRow row;
    row.xi = xi;
    row.lambda_lower = lambda_lower(xi);
    row.lambda_upper = lambda_upper(xi);
    row.lambda_watabiki_ext = watabiki_lambda_ext(xi);
    row.lambda_dg_guess = dg_guess_lambda(xi);
    row.alpha_star_at_lower = alpha_star(xi, row.lambda_lower);
    row.g_upper_at_lower = g_upper(xi, row.lambda_lower);
    if (xi > 0.0) {
        row.q_at_lower = q_of(xi, row.lambda_lower);
        row.q_at_upper = q_of(xi, row.lambda_upper);
        row.c_at_lower = c_of(xi, row.lambda_lower);
        row.c_at_upper = c_of(xi, row.lambda_upper);
    } else {
        double inf = std::numeric_limits<double>::infinity();
        row.q_at_lower = inf;
        row.q_at_upper = inf;
        row.c_at_lower = -inf;
        row.c_at_upper = -inf;
    }
    return row;
}

GammaRow gamma_row(double gamma) {
    GammaRow row;
    row.gamma = gamma;
    row.d_lower = d_lower(gamma);
    row.d_upper = d_upper(gamma);
    row.d_watabiki = watabiki_d(gamma);
    row.d_dg_guess = dg_guess_d(gamma);
    row.xi_of_gamma_lower = gamma / row.d_upper;
    row.xi_of_gamma_upper = gamma / row.d_lower;
    // The bound decreases in d, so the low end of the d band is conservative.
    row.geodesic_dim_bound = geodesic_gamma_bound(gamma, row.d_lower);
    return row;
}

IneqReport check_differential_inequalities(const std::function<double(double)>& lam_fn,
                                           const std::vector<double>& xi_grid) {
    for (std::size_t i = 0; i + 1 < xi_grid.size(); ++i) {
        if (!(xi_grid[i] < xi_grid[i + 1]))
            throw std::invalid_argument("check_differential_inequalities: grid must be sorted ascending");
    }
    if (!xi_grid.empty() && xi_grid.front() < 0.0)
        throw std::invalid_argument("check_differential_inequalities: grid must be nonnegative");

    IneqReport report;
    std::vector<double> lam(xi_grid.size());
    for (std::size_t i = 0; i < xi_grid.size(); ++i) {
        lam[i] = lam_fn(xi_grid[i]);
        if (lam[i] < -0.5 - kTol || lam[i] > 1.0 + kTol) {
            double margin = std::max(-0.5 - lam[i], lam[i] - 1.0);
            report.violations.push_back({IneqKind::range, xi_grid[i], xi_grid[i], margin});
        }
    }
    for (std::size_t j = 1; j < xi_grid.size(); ++j) {
        double x = xi_grid[j];
        double rad = 2.0 + 2.0 * lam[j] + x * x;
        double astar = rad >= 0.0 ? std::sqrt(rad) - x : 0.0;
        for (std::size_t i = 0; i < j; ++i) {
            double xt = xi_grid[i];
            double gap = x - xt;
            ++report.pairs_checked;

            double slope = (lam[j] - lam[i]) / gap;
            if (rad >= 0.0 && slope > astar + kTol)
                report.violations.push_back({IneqKind::slope_bound, xt, x, slope - astar});

            double shift = (lam[i] + xt * xt / 2.0) - (lam[j] + x * x / 2.0);
            if (shift > kTol)
                report.violations.push_back({IneqKind::shift_monotone, xt, x, shift});

            double lip = std::abs(lam[j] - lam[i]) - 2.0 * gap;
            if (lip > kTol)
                report.violations.push_back({IneqKind::lipschitz, xt, x, lip});
        }
    }
    return report;
}

}  // namespace lfpp::bounds
