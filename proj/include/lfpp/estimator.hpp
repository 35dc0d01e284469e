#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lfpp/field.hpp"

// Log-log regression of per-scale Monte-Carlo summaries into exponent
// estimates. Sign convention: distances scale like eps^lambda, so the lambda
// target negates the slope against log(1/eps); vertex counts and census
// counts scale like eps^{-exponent}, so those targets return the slope as is.

namespace lfpp::estimate {

enum class Target { lambda, g, census };

struct ExperimentPlan {
    std::vector<double> xi_list;
    std::vector<int> k_list;  // strictly increasing
    int replicates = 0;
    field::SamplerKind sampler = field::SamplerKind::fourier;
    std::uint64_t master_seed = 0;
    double quantile_q = 0.5;
    double slack_lambda_g = 0.15;
    double slack_census = 0.3;
    int min_fit_k = 4;  // scales below are excluded from fits
    double padding_factor = 1.0;
    bool store_geodesics = false;
    std::vector<double> multi_xi;       // extra xi_tilde evaluations per geodesic
    std::vector<double> census_alphas;  // census thresholds per replicate
};

void validate_plan(const ExperimentPlan& plan);

// One line of the simulate output: a crossing at (xi, k) plus the optional
// evaluations of the same geodesic under other xi values.
struct CrossingRecord {
    double xi = 0;
    int k = 0;
    std::uint64_t seed = 0;
    field::SamplerKind sampler = field::SamplerKind::fourier;
    double distance = 0;
    std::int64_t vertex_count = 0;
    std::vector<double> multi_xi;
    std::vector<double> multi_lengths;
    std::vector<std::int32_t> geodesic;  // optional, empty unless requested
};

struct CensusRecord {
    int k = 0;
    std::uint64_t seed = 0;
    field::SamplerKind sampler = field::SamplerKind::fourier;
    double alpha = 0;
    std::int64_t count = 0;
};

struct FitPoint {
    double log_inv_eps = 0;
    double log_obs = 0;
};

struct OlsFit {
    double slope = 0;
    double intercept = 0;
    double stderr_slope = 0;
    double r_squared = 0;
    int n = 0;
};

OlsFit ols_fit(const std::vector<FitPoint>& points);

// exponent under the target's sign convention; other fields as in OlsFit
struct ScalingFit {
    double exponent = 0;
    double intercept = 0;
    double stderr_slope = 0;
    double r_squared = 0;
};

ScalingFit fit_loglog(const std::vector<FitPoint>& points, Target target);

// type-7 (linear interpolation) sample quantile
double quantile(std::vector<double> values, double q);

enum class EstimateStatus { ok, insufficient_signal };

struct PerScale {
    int k = 0;
    double quantile_value = 0;
    int replicate_count = 0;
};

struct ScalingEstimate {
    Target target = Target::lambda;
    double exponent = 0;
    double stderr_exp = 0;
    double r_squared = 0;
    std::vector<PerScale> per_scale;
    EstimateStatus status = EstimateStatus::ok;
    std::vector<std::string> warnings;
};

ScalingEstimate estimate_lambda(const ExperimentPlan& plan,
                                const std::vector<CrossingRecord>& records, double xi);
ScalingEstimate estimate_g(const ExperimentPlan& plan, const std::vector<CrossingRecord>& records,
                           double xi);
ScalingEstimate estimate_census_exponent(const ExperimentPlan& plan, double alpha,
                                         const std::vector<CensusRecord>& records);

struct Thm21Report {
    double xi = 0;
    double xi_tilde = 0;
    double lambda_hat = 0;
    double fitted_exponent = 0;  // decay exponent of L^{xi_tilde} along the xi geodesic
    double bound_exponent = 0;   // length_compare_exponent(xi, xi_tilde, lambda_hat)
    double margin = 0;           // fitted - (bound - slack)
    bool pass = false;
};

Thm21Report theorem21_check(const ExperimentPlan& plan, double xi, double xi_tilde,
                            const std::vector<CrossingRecord>& records);

}  // namespace lfpp::estimate
