#pragma once

#include <functional>
#include <utility>
#include <vector>

// Closed-form bounds and predictions for the LFPP distance exponent lambda(xi),
// the LQG dimension d_gamma, and the geodesic dimension g(xi), plus numeric
// checks of the differential inequalities that constrain candidate lambda
// functions. All operations are pure; domain violations throw std::domain_error.

namespace lfpp::bounds {

// sqrt(5/2) - 1/sqrt(6) and (sqrt(15)-2)/6, the slope/intercept of the linear
// piece shared by the lower and upper lambda bounds.
double line_slope();
double line_intercept();

double xi_knot();     // 1/sqrt(6), where the lambda bounds touch at 1/6
double gamma_knot();  // sqrt(8/3), where the d bounds touch at 4

double lambda_lower(double xi);
double lambda_upper(double xi);
double watabiki_lambda_ext(double xi);  // min{xi^2, 1}
double dg_guess_lambda(double xi);      // min{xi/sqrt(6), 1}

double watabiki_d(double gamma);
double dg_guess_d(double gamma);
double d_lower(double gamma);
double d_upper(double gamma);

// lambda at xi = gamma/d implied by 1 - (gamma/d)*Q(gamma), Q = 2/gamma + gamma/2.
double lambda_from_gamma(double gamma, double d);

double alpha_star(double xi, double lam);  // sqrt(2 + 2 lam + xi^2) - xi
double length_compare_exponent(double xi, double xi_tilde, double lam);
double g_upper(double xi, double lam);     // 1 - lam + xi * alpha_star

// Upper bound for the Euclidean dimension of gamma-LQG geodesics given a
// candidate dimension d: identical to g_upper(gamma/d, lambda_from_gamma(gamma, d)).
double geodesic_gamma_bound(double gamma, double d);

double q_of(double xi, double lam);  // (1 - lam)/xi, xi > 0
double c_of(double xi, double lam);  // 25 - 6 Q^2

std::pair<double, double> contradiction_interval();
double q_mono_threshold();

struct BoundsRow {
    double xi = 0;
    double lambda_lower = 0;
    double lambda_upper = 0;
    double lambda_watabiki_ext = 0;
    double lambda_dg_guess = 0;
    double alpha_star_at_lower = 0;
    double g_upper_at_lower = 0;
    double q_at_lower = 0;  // +inf at xi = 0
    double q_at_upper = 0;
    double c_at_lower = 0;  // -inf at xi = 0
    double c_at_upper = 0;
};

struct GammaRow {
    double gamma = 0;
    double d_lower = 0;
    double d_upper = 0;
    double d_watabiki = 0;
    double d_dg_guess = 0;
    double xi_of_gamma_lower = 0;  // gamma / d_upper
    double xi_of_gamma_upper = 0;  // gamma / d_lower
    double geodesic_dim_bound = 0;
};

BoundsRow bounds_row(double xi);
GammaRow gamma_row(double gamma);

enum class IneqKind {
    slope_bound,     // (lam(x) - lam(xt))/(x - xt) <= alpha_star(x, lam(x))
    shift_monotone,  // lam(xt) + xt^2/2 <= lam(x) + x^2/2
    lipschitz,       // |lam(x) - lam(xt)| <= 2 (x - xt)
    range            // lam in [-1/2, 1]
};

struct IneqViolation {
    IneqKind kind;
    double xi_tilde;
    double xi;      // for range violations xi_tilde == xi
    double margin;  // positive amount by which the inequality fails
};

struct IneqReport {
    std::vector<IneqViolation> violations;
    long pairs_checked = 0;
    bool ok() const { return violations.empty(); }
};

// Evaluates the slope bound and the shift monotonicity on every pair
// xi_tilde < xi of the grid, plus the Lipschitz and range checks.
// Grid must be sorted ascending and nonnegative.
IneqReport check_differential_inequalities(const std::function<double(double)>& lam_fn,
                                           const std::vector<double>& xi_grid);

}  // namespace lfpp::bounds
