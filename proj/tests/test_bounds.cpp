#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lfpp/bounds.hpp"

using namespace lfpp::bounds;

namespace {

// Golden decimals computed independently at 30-digit precision from the
// integer surd expressions; tests compare at 1e-9 or tighter.
constexpr double kLineSlope = 1.172890539620327;
constexpr double kLineIntercept = 0.312163891034569;
constexpr double kG4Sqrt15Over6 = 1.312163891034569;    // (4+sqrt(15))/6
constexpr double kTwoSqrt10Minus5 = 1.324555320336759;  // 2 sqrt(10) - 5

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
    return g;
}

}  // namespace

TEST_CASE("line constants") {
    CHECK(line_slope() == doctest::Approx(kLineSlope).epsilon(1e-12));
    CHECK(line_intercept() == doctest::Approx(kLineIntercept).epsilon(1e-12));
}

TEST_CASE("lambda bounds at the knot and near zero") {
    double knot = xi_knot();
    CHECK(std::abs(lambda_lower(knot) - 1.0 / 6.0) < 1e-12);
    CHECK(std::abs(lambda_upper(knot) - 1.0 / 6.0) < 1e-12);
    CHECK(lambda_lower(0.0) == 0.0);
    CHECK(lambda_upper(0.0) == 0.0);
    CHECK(lambda_lower(0.2) == doctest::Approx(-0.02).epsilon(1e-12));
    CHECK(lambda_upper(0.2) == doctest::Approx(0.23).epsilon(1e-12));
    CHECK_THROWS_AS(lambda_lower(-0.1), std::domain_error);
    CHECK_THROWS_AS(lambda_upper(-0.1), std::domain_error);
}

TEST_CASE("lambda bounds band, continuity and Lipschitz") {
    auto grid = linspace(0.0, 3.0, 3001);
    double prev_lo = lambda_lower(0.0), prev_hi = lambda_upper(0.0), prev_x = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double lo = lambda_lower(grid[i]), hi = lambda_upper(grid[i]);
        CHECK(lo <= hi + 1e-12);
        CHECK(lo >= -0.5 - 1e-12);
        CHECK(hi <= 1.0 + 1e-12);
        double dx = grid[i] - prev_x;
        CHECK(std::abs(lo - prev_lo) <= 2.0 * dx + 1e-9);
        CHECK(std::abs(hi - prev_hi) <= 2.0 * dx + 1e-9);
        // equality only at the knot
        if (std::abs(grid[i] - xi_knot()) > 1e-3) CHECK(hi - lo > 1e-6);
        prev_lo = lo;
        prev_hi = hi;
        prev_x = grid[i];
    }
    double below = lambda_lower(xi_knot() - 1e-13);
    double above = lambda_lower(xi_knot() + 1e-13);
    CHECK(std::abs(below - above) < 1e-12);
    below = lambda_upper(xi_knot() - 1e-13);
    above = lambda_upper(xi_knot() + 1e-13);
    CHECK(std::abs(below - above) < 1e-12);
}

TEST_CASE("watabiki and dg closed forms") {
    CHECK(watabiki_d(gamma_knot()) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(watabiki_d(std::sqrt(2.0)) == doctest::Approx(3.561552812808830).epsilon(1e-12));
    CHECK(watabiki_d(2.0) == doctest::Approx(4.828427124746190).epsilon(1e-12));
    CHECK(watabiki_lambda_ext(1.0 / std::sqrt(3.0)) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(watabiki_lambda_ext(1.7) == 1.0);
    CHECK(dg_guess_lambda(0.0) == 0.0);
    CHECK(dg_guess_d(gamma_knot()) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK_THROWS_AS(watabiki_d(0.0), std::domain_error);
    CHECK_THROWS_AS(watabiki_d(2.1), std::domain_error);
}

TEST_CASE("d bounds: knot, frozen values, stable small-gamma branch") {
    CHECK(d_lower(gamma_knot()) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(d_upper(gamma_knot()) == doctest::Approx(4.0).epsilon(1e-12));
    // at gamma=1 the linear branch wins over the conjugate branch
    CHECK(d_lower(1.0) == doctest::Approx(2.799109596534053).epsilon(1e-12));
    CHECK((4.0 + 1.0 + std::sqrt(17.0)) / 4.0 == doctest::Approx(2.280776406404415).epsilon(1e-12));
    CHECK(d_upper(2.0) == doctest::Approx(4.836119270312607).epsilon(1e-12));
    // small gamma: conjugate form stays finite and above 2
    CHECK(d_lower(1e-8) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(d_lower(1e-8) >= 2.0);
}

TEST_CASE("d band contains watabiki and dg guess") {
    for (double g : linspace(0.001, 2.0, 2000)) {
        double lo = d_lower(g), hi = d_upper(g);
        CHECK(lo <= hi + 1e-12);
        CHECK(lo >= 2.0 - 1e-12);
        double w = watabiki_d(g), dg = dg_guess_d(g);
        CHECK(lo <= w + 1e-12);
        CHECK(w <= hi + 1e-12);
        CHECK(lo <= dg + 1e-12);
        CHECK(dg <= hi + 1e-12);
    }
}

TEST_CASE("duality: d bounds invert the lambda bounds through xi = gamma/d") {
    for (double g : linspace(0.01, 2.0, 500)) {
        double du = d_upper(g), dl = d_lower(g);
        CHECK(lambda_from_gamma(g, du) == doctest::Approx(lambda_upper(g / du)).epsilon(1e-9));
        CHECK(lambda_from_gamma(g, dl) == doctest::Approx(lambda_lower(g / dl)).epsilon(1e-9));
    }
    CHECK(lambda_from_gamma(gamma_knot(), 4.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(lambda_from_gamma(2.0, 4.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(lambda_from_gamma(1.0, 2.5) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("alpha_star, length comparison exponent, g bound") {
    CHECK(alpha_star(0.0, 0.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(alpha_star(1.0, 1.0) == doctest::Approx(std::sqrt(5.0) - 1.0).epsilon(1e-12));
    CHECK(alpha_star(xi_knot(), 1.0 / 6.0) == doctest::Approx(kLineSlope).epsilon(1e-12));
    CHECK_THROWS_AS(alpha_star(0.0, -1.5), std::domain_error);

    CHECK(length_compare_exponent(0.7, 0.7, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(length_compare_exponent(xi_knot(), 0.0, 1.0 / 6.0) ==
          doctest::Approx(-kLineIntercept).epsilon(1e-9));
    CHECK(length_compare_exponent(1.0, 0.0, 0.0) ==
          doctest::Approx(1.0 - std::sqrt(3.0)).epsilon(1e-12));
    CHECK_THROWS_AS(length_compare_exponent(0.5, 0.6, 0.0), std::domain_error);

    CHECK(g_upper(xi_knot(), 1.0 / 6.0) == doctest::Approx(kG4Sqrt15Over6).epsilon(1e-9));
    CHECK(g_upper(0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    double xi0 = 2.0 - std::sqrt(5.0 / 2.0);
    CHECK(g_upper(xi0, lambda_lower(xi0)) == doctest::Approx(kTwoSqrt10Minus5).epsilon(1e-9));
}

TEST_CASE("g bound along the lower lambda bound is constant on the plateau") {
    // constant at (4+sqrt(15))/6 between the branch crossover (~0.2413) and the knot
    for (double xi : linspace(0.2415, xi_knot() - 1e-6, 100)) {
        CHECK(g_upper(xi, lambda_lower(xi)) == doctest::Approx(kG4Sqrt15Over6).epsilon(1e-9));
    }
    CHECK(g_upper(0.0, lambda_lower(0.0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("g_upper strictly decreasing in lambda") {
    for (double xi : {0.0, 0.3, 1.0, 2.0}) {
        double prev = g_upper(xi, -1.0);
        for (double lam : linspace(-0.95, 1.0, 40)) {
            double cur = g_upper(xi, lam);
            CHECK(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("geodesic gamma bound matches its identity and frozen values") {
    CHECK(geodesic_gamma_bound(gamma_knot(), 4.0) == doctest::Approx(kG4Sqrt15Over6).epsilon(1e-9));
    CHECK(geodesic_gamma_bound(std::sqrt(2.0), 3.5) ==
          doctest::Approx(g_upper(std::sqrt(2.0) / 3.5, lambda_from_gamma(std::sqrt(2.0), 3.5)))
              .epsilon(1e-13));
    CHECK(geodesic_gamma_bound(1.0, 2.5) == doctest::Approx(1.427877538267963).epsilon(1e-9));
    CHECK_THROWS_AS(geodesic_gamma_bound(1.0, 0.0), std::domain_error);
}

TEST_CASE("Q and central charge") {
    CHECK(q_of(xi_knot(), 1.0 / 6.0) == doctest::Approx(2.041241452319315).epsilon(1e-12));
    CHECK(c_of(xi_knot(), 1.0 / 6.0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(q_of(1.0 / std::sqrt(3.0), 1.0 / 3.0) == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-12));
    CHECK(c_of(1.0 / std::sqrt(3.0), 1.0 / 3.0) == doctest::Approx(17.0).epsilon(1e-9));
    CHECK(q_of(0.9, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(c_of(0.9, 1.0) == doctest::Approx(25.0).epsilon(1e-12));
    CHECK_THROWS_AS(q_of(0.0, 0.0), std::domain_error);
}

TEST_CASE("Q along the upper bound is non-increasing") {
    double prev = q_of(0.01, lambda_upper(0.01));
    for (double xi : linspace(0.02, 3.0, 600)) {
        double q = q_of(xi, lambda_upper(xi));
        CHECK(q <= prev + 1e-12);
        prev = q;
    }
}

TEST_CASE("contradiction interval and Q-monotonicity threshold") {
    auto [lo, hi] = contradiction_interval();
    CHECK(lo == doctest::Approx(0.764642249156464).epsilon(1e-12));
    CHECK(hi == doctest::Approx(1.118743690659596).epsilon(1e-12));
    CHECK(q_mono_threshold() == doctest::Approx(0.700443204579628).epsilon(1e-12));
    // inside the interval the watabiki extension exceeds the upper bound
    CHECK(lambda_upper(0.8) < 0.8 * 0.8);
}

TEST_CASE("2xi > alpha_star(xi, xi^2) exactly above 1/sqrt(3)") {
    double root = 1.0 / std::sqrt(3.0);
    CHECK(2.0 * (root - 1e-6) < alpha_star(root - 1e-6, (root - 1e-6) * (root - 1e-6)));
    CHECK(2.0 * (root + 1e-6) > alpha_star(root + 1e-6, (root + 1e-6) * (root + 1e-6)));
    CHECK(std::abs(2.0 * root - alpha_star(root, root * root)) < 1e-9);
}

TEST_CASE("differential inequality checker: lower bound is clean") {
    auto report = check_differential_inequalities([](double x) { return lambda_lower(x); },
                                                  linspace(0.0, 2.0, 1000));
    CHECK(report.ok());
    CHECK(report.pairs_checked == 1000L * 999L / 2L);
}

TEST_CASE("differential inequality checker: watabiki violations sit above 1/sqrt(3)") {
    auto grid = linspace(0.0, 3.0, 800);
    auto report = check_differential_inequalities([](double x) { return watabiki_lambda_ext(x); }, grid);
    CHECK(!report.ok());
    bool found_known_pair = false;
    for (const auto& v : report.violations) {
        CHECK(v.kind == IneqKind::slope_bound);
        CHECK(v.xi > 1.0 / std::sqrt(3.0) - 1e-9);
        if (std::abs(v.xi_tilde - 0.6) < 2e-3 && std::abs(v.xi - 0.8) < 2e-3) found_known_pair = true;
    }
    CHECK(found_known_pair);
}

TEST_CASE("differential inequality checker: constant zero has no shift violations") {
    auto report = check_differential_inequalities([](double) { return 0.0; }, linspace(0.0, 2.0, 200));
    for (const auto& v : report.violations) CHECK(v.kind != IneqKind::shift_monotone);
    CHECK(report.ok());
}

TEST_CASE("differential inequality checker rejects unsorted grids") {
    CHECK_THROWS_AS(check_differential_inequalities([](double x) { return x; }, {0.5, 0.2}),
                    std::invalid_argument);
}

TEST_CASE("rows assemble the per-point quantities") {
    auto row = bounds_row(xi_knot());
    CHECK(row.lambda_lower == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(row.lambda_upper == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(row.g_upper_at_lower == doctest::Approx(kG4Sqrt15Over6).epsilon(1e-9));
    CHECK(row.c_at_lower == doctest::Approx(0.0).epsilon(1e-9));

    auto zero = bounds_row(0.0);
    CHECK(std::isinf(zero.q_at_lower));
    CHECK(zero.c_at_lower < 0);

    auto grow = gamma_row(gamma_knot());
    CHECK(grow.d_lower == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(grow.d_upper == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(grow.xi_of_gamma_lower == doctest::Approx(xi_knot()).epsilon(1e-12));
    CHECK(grow.geodesic_dim_bound == doctest::Approx(kG4Sqrt15Over6).epsilon(1e-9));
}
