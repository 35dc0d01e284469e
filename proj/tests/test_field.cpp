#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "lfpp/estimator.hpp"
#include "lfpp/field.hpp"
#include "lfpp/rng.hpp"

using namespace lfpp;
using field::GridSpec;
using field::SamplerKind;

namespace {

constexpr double kLog2 = std::numbers::ln2;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// dense covariance of the padded zero-boundary field: 2*pi times the inverse
// of the 5-point Dirichlet Laplacian on the m x m interior
Eigen::MatrixXd dense_dirichlet_covariance(int m) {
    int total = m * m;
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(total, total);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            int u = i * m + j;
            lap(u, u) = 4.0;
            if (i > 0) lap(u, u - m) = -1.0;
            if (i + 1 < m) lap(u, u + m) = -1.0;
            if (j > 0) lap(u, u - 1) = -1.0;
            if (j + 1 < m) lap(u, u + 1) = -1.0;
        }
    }
    return kTwoPi * lap.inverse();
}

double sample_moment(const std::vector<double>& xs, int order, double mean, double sd) {
    double acc = 0;
    for (double x : xs) acc += std::pow((x - mean) / sd, order);
    return acc / static_cast<double>(xs.size());
}

}  // namespace

TEST_CASE("sampler names round trip") {
    CHECK(field::sampler_from_name("exact_dgff") == SamplerKind::exact_dgff);
    CHECK(field::sampler_from_name("exact") == SamplerKind::exact_dgff);
    CHECK(field::sampler_from_name("fourier") == SamplerKind::fourier);
    CHECK(field::sampler_from_name("layered") == SamplerKind::layered);
    for (auto kind : {SamplerKind::exact_dgff, SamplerKind::fourier, SamplerKind::layered})
        CHECK(field::sampler_from_name(field::sampler_name(kind)) == kind);
    CHECK_THROWS_AS(field::sampler_from_name("white"), std::invalid_argument);
}

TEST_CASE("grid construction guards its arguments") {
    CHECK_THROWS_AS(field::make_grid(-1), std::domain_error);
    CHECK_THROWS_AS(field::make_grid(21), std::domain_error);
    CHECK_THROWS_AS(field::make_grid(4, -0.5), std::domain_error);
    auto g = field::make_grid(4);
    CHECK(g.n_per_side == 17);
    CHECK(g.epsilon == 1.0 / 16);
}

TEST_CASE("samplers are bit-deterministic in (spec, seed)") {
    auto spec = field::make_grid(3);
    for (auto kind : {SamplerKind::exact_dgff, SamplerKind::fourier, SamplerKind::layered}) {
        auto a = field::sample(kind, spec, 12345);
        auto b = field::sample(kind, spec, 12345);
        auto c = field::sample(kind, spec, 12346);
        CHECK(a.values == b.values);
        CHECK(a.values != c.values);
        CHECK(a.kind == kind);
        double mean = 0;
        for (double v : a.values) mean += v;
        CHECK(std::abs(mean / a.values.size()) < 1e-10);
    }
}

TEST_CASE("exact sampler marginals match the dense Dirichlet inverse") {
    auto spec = field::make_grid(2);  // pad 4 cells, padded interior 11 x 11
    int m = (spec.n_per_side - 1) + 2 * 4 - 1;
    REQUIRE(m == 11);
    Eigen::MatrixXd cov = dense_dirichlet_covariance(m);
    int pad = 4;
    for (int i = 0; i < spec.n_per_side; ++i) {
        for (int j = 0; j < spec.n_per_side; ++j) {
            int u = (pad + i - 1) * m + (pad + j - 1);
            CHECK(field::exact_vertex_variance(spec, i, j) ==
                  doctest::Approx(cov(u, u)).epsilon(1e-8));
        }
    }
    CHECK_THROWS_AS(field::exact_vertex_variance(spec, -1, 0), std::out_of_range);
    CHECK_THROWS_AS(field::exact_vertex_variance(spec, 0, spec.n_per_side), std::out_of_range);
}

TEST_CASE("exact sampler empirical covariance matches the projected dense oracle") {
    auto spec = field::make_grid(2);
    int n = spec.n_per_side, nn = n * n;
    int m = 11, pad = 4;
    Eigen::MatrixXd cov = dense_dirichlet_covariance(m);

    // restrict to the extracted square, then apply the mean-subtraction
    // projection the sampler performs
    Eigen::MatrixXd sub(nn, nn);
    for (int a = 0; a < nn; ++a) {
        int ia = a / n, ja = a % n;
        int ua = (pad + ia - 1) * m + (pad + ja - 1);
        for (int b = 0; b < nn; ++b) {
            int ib = b / n, jb = b % n;
            int ub = (pad + ib - 1) * m + (pad + jb - 1);
            sub(a, b) = cov(ua, ub);
        }
    }
    Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(nn, nn) -
                           Eigen::MatrixXd::Constant(nn, nn, 1.0 / nn);
    Eigen::MatrixXd expected = proj * sub * proj.transpose();

    const int reps = 6000;
    Eigen::MatrixXd emp = Eigen::MatrixXd::Zero(nn, nn);
    for (int r = 0; r < reps; ++r) {
        auto s = field::sample_exact_dgff(spec, rng::combine({55, (unsigned)r}));
        Eigen::Map<const Eigen::VectorXd> v(s.values.data(), nn);
        emp += v * v.transpose();
    }
    emp /= static_cast<double>(reps);

    double max_diff = (emp - expected).cwiseAbs().maxCoeff();
    double mean_diff = (emp - expected).cwiseAbs().mean();
    CHECK(max_diff < 0.35);
    CHECK(mean_diff < 0.08);
}

TEST_CASE("exact center variance grows by log 2 per scale") {
    std::vector<estimate::FitPoint> pts;
    for (int k = 3; k <= 8; ++k)
        pts.push_back({k * kLog2, field::exact_center_variance(field::make_grid(k))});
    auto fit = estimate::ols_fit(pts);
    CHECK(fit.slope == doctest::Approx(1.0).epsilon(0.05));
    CHECK(fit.r_squared > 0.999);
}

TEST_CASE("per-sampler empirical variance slope is near one") {
    for (auto kind : {SamplerKind::exact_dgff, SamplerKind::fourier, SamplerKind::layered}) {
        std::vector<estimate::FitPoint> pts;
        for (int k = 3; k <= 6; ++k) {
            auto spec = field::make_grid(k);
            std::vector<field::FieldSample> reps;
            reps.reserve(400);
            for (int r = 0; r < 400; ++r)
                reps.push_back(field::sample(
                    kind, spec, rng::combine({60, (unsigned)kind, (unsigned)k, (unsigned)r})));
            auto stats = field::validate_field(reps);
            CHECK(!stats.degenerate);
            pts.push_back({k * kLog2, stats.center_variance});
        }
        auto fit = estimate::ols_fit(pts);
        INFO("sampler ", field::sampler_name(kind), " slope ", fit.slope);
        CHECK(fit.slope > 0.75);
        CHECK(fit.slope < 1.25);
    }
}

TEST_CASE("fourier covariance falls off with log distance") {
    auto spec = field::make_grid(7);
    std::vector<field::FieldSample> reps;
    reps.reserve(800);
    for (int r = 0; r < 800; ++r)
        reps.push_back(field::sample_fourier(spec, rng::combine({61, (unsigned)r})));
    auto stats = field::validate_field(reps);
    REQUIRE(stats.cov_fit_valid);
    REQUIRE(stats.cov_points.size() >= 3);
    CHECK(stats.cov_slope > -1.2);
    CHECK(stats.cov_slope < -0.8);
}

TEST_CASE("per-vertex variance is uniform across the domain") {
    for (auto kind : {SamplerKind::exact_dgff, SamplerKind::fourier}) {
        auto spec = field::make_grid(5);
        std::vector<field::FieldSample> reps;
        reps.reserve(1000);
        for (int r = 0; r < 1000; ++r)
            reps.push_back(
                field::sample(kind, spec, rng::combine({64, (unsigned)kind, (unsigned)r})));
        auto stats = field::validate_field(reps);
        INFO("sampler ", field::sampler_name(kind), " spread ", stats.uniformity_spread);
        CHECK(stats.uniformity_ok);
    }
}

TEST_CASE("fourier center values look Gaussian") {
    auto spec = field::make_grid(4);
    int c = (spec.n_per_side / 2) * spec.n_per_side + spec.n_per_side / 2;
    std::vector<double> xs;
    xs.reserve(4000);
    for (int r = 0; r < 4000; ++r)
        xs.push_back(field::sample_fourier(spec, rng::combine({62, (unsigned)r})).values[c]);
    double mean = 0;
    for (double x : xs) mean += x;
    mean /= xs.size();
    double var = 0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= (xs.size() - 1);
    double sd = std::sqrt(var);
    CHECK(std::abs(sample_moment(xs, 3, mean, sd)) < 0.15);
    CHECK(std::abs(sample_moment(xs, 4, mean, sd) - 3.0) < 0.35);
}

TEST_CASE("fourier calibration matches the exact center variance at its anchor") {
    double c0 = field::fourier_calibration_c0(1.0);
    CHECK(c0 ==
          doctest::Approx(field::exact_center_variance_normalized(field::make_grid(5, 1.0)) -
                          5.0 * kLog2)
              .epsilon(1e-12));
    CHECK(std::isfinite(c0));
    CHECK(std::abs(c0) < 20.0);

    // the normalized diagonal must sit below the raw one: subtraction removes
    // the padded box's large-scale modes
    auto g5 = field::make_grid(5, 1.0);
    CHECK(field::exact_center_variance_normalized(g5) < field::exact_center_variance(g5));
}

TEST_CASE("emitted center variances of exact and fourier agree at the anchor scale") {
    auto spec = field::make_grid(5);
    int n = spec.n_per_side;
    std::size_t c = static_cast<std::size_t>(n / 2) * n + n / 2;
    const int reps = 2000;
    double se = 0, se2 = 0, sf = 0, sf2 = 0;
    for (int r = 0; r < reps; ++r) {
        double e =
            field::sample_exact_dgff(spec, rng::combine({71, (unsigned)r})).values[c];
        double f = field::sample_fourier(spec, rng::combine({72, (unsigned)r})).values[c];
        se += e;
        se2 += e * e;
        sf += f;
        sf2 += f * f;
    }
    double var_e = (se2 - se * se / reps) / (reps - 1);
    double var_f = (sf2 - sf * sf / reps) / (reps - 1);
    double anchor = field::exact_center_variance_normalized(spec);
    CHECK(var_e == doctest::Approx(anchor).epsilon(0.12));
    CHECK(std::abs(var_f - var_e) < 0.6);
}

TEST_CASE("fourier sampler requires enough padding to avoid wraparound") {
    CHECK_THROWS_AS(field::sample_fourier(field::make_grid(3, 0.0), 1), std::domain_error);
    CHECK_THROWS_AS(field::sample_fourier(field::make_grid(3, 0.01), 1), std::domain_error);
}

TEST_CASE("exact sampler rejects grids beyond the factorization cap") {
    CHECK_THROWS_AS(field::sample_exact_dgff(field::make_grid(10), 1), std::length_error);
}

TEST_CASE("layered layers are anchored to their lattice across resolutions") {
    auto g3 = field::make_grid(3);
    auto g4 = field::make_grid(4);
    auto l3 = field::layered_layer(g3, 909, 2);
    auto l4 = field::layered_layer(g4, 909, 2);
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; b <= 4; ++b)
            CHECK(l3[(2 * a) * 9 + 2 * b] == l4[(4 * a) * 17 + 4 * b]);
    CHECK_THROWS_AS(field::layered_layer(g3, 1, 4), std::out_of_range);
    CHECK_THROWS_AS(field::layered_layer(g3, 1, -1), std::out_of_range);
}

TEST_CASE("layered raw center variance is (k + 1) log 2") {
    auto spec = field::make_grid(4);
    int n = spec.n_per_side;
    int c = (n / 2) * n + n / 2;
    const int reps = 4000;
    double acc = 0, acc2 = 0;
    for (int r = 0; r < reps; ++r) {
        std::uint64_t seed = rng::combine({63, (unsigned)r});
        double v = 0;
        for (int j = 0; j <= spec.k; ++j) v += field::layered_layer(spec, seed, j)[c];
        acc += v;
        acc2 += v * v;
    }
    double mean = acc / reps;
    double var = acc2 / reps - mean * mean;
    CHECK(var == doctest::Approx((spec.k + 1) * kLog2).epsilon(0.12));
}

TEST_CASE("validate_field reports degeneracy and rejects mixed inputs") {
    auto spec = field::make_grid(3);
    std::vector<field::FieldSample> one{field::sample_layered(spec, 5)};
    auto stats = field::validate_field(one);
    CHECK(stats.degenerate);
    CHECK(stats.replicate_count == 1);
    CHECK_THROWS_AS(field::validate_field({}), std::invalid_argument);
    std::vector<field::FieldSample> mixed{field::sample_layered(spec, 5),
                                          field::sample_fourier(spec, 5)};
    CHECK_THROWS_AS(field::validate_field(mixed), std::invalid_argument);
    std::vector<field::FieldSample> sizes{field::sample_layered(spec, 5),
                                          field::sample_layered(field::make_grid(4), 5)};
    CHECK_THROWS_AS(field::validate_field(sizes), std::invalid_argument);
}
