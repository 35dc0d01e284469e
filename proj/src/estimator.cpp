#include "lfpp/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

#include "lfpp/bounds.hpp"

namespace lfpp::estimate {

namespace {

constexpr double kLog2 = std::numbers::ln2;

bool same_xi(double a, double b) { return std::abs(a - b) < 1e-12; }

// per-scale quantiles of an observable pulled out of the records
template <typename Rec, typename Get>
std::map<int, std::vector<double>> group_by_k(const std::vector<Rec>& records, Get get) {
    std::map<int, std::vector<double>> cells;
    for (const auto& r : records) cells[r.k].push_back(get(r));
    return cells;
}

}  // namespace

void validate_plan(const ExperimentPlan& plan) {
    if (plan.k_list.empty()) throw std::invalid_argument("plan: empty k_list");
    for (std::size_t i = 0; i + 1 < plan.k_list.size(); ++i)
        if (plan.k_list[i] >= plan.k_list[i + 1])
            throw std::invalid_argument("plan: k_list must be strictly increasing");
    if (plan.replicates < 1) throw std::invalid_argument("plan: replicates must be positive");
    if (plan.quantile_q < 0 || plan.quantile_q > 1)
        throw std::invalid_argument("plan: quantile outside [0,1]");
    for (double xi : plan.xi_list)
        if (xi < 0) throw std::invalid_argument("plan: negative xi");
}

OlsFit ols_fit(const std::vector<FitPoint>& points) {
    if (points.size() < 3) throw std::invalid_argument("ols_fit: need at least 3 points");
    double n = static_cast<double>(points.size());
    double sx = 0, sy = 0;
    for (const auto& p : points) {
        sx += p.log_inv_eps;
        sy += p.log_obs;
    }
    double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& p : points) {
        double dx = p.log_inv_eps - mx, dy = p.log_obs - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0) throw std::invalid_argument("ols_fit: degenerate abscissae");
    OlsFit fit;
    fit.n = static_cast<int>(points.size());
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0;
    for (const auto& p : points) {
        double r = p.log_obs - (fit.intercept + fit.slope * p.log_inv_eps);
        ss_res += r * r;
    }
    fit.stderr_slope = std::sqrt(std::max(ss_res, 0.0) / (n - 2.0) / sxx);
    fit.r_squared = syy > 0 ? std::max(0.0, 1.0 - ss_res / syy) : 1.0;
    return fit;
}

ScalingFit fit_loglog(const std::vector<FitPoint>& points, Target target) {
    OlsFit fit = ols_fit(points);
    ScalingFit out;
    out.exponent = target == Target::lambda ? -fit.slope : fit.slope;
    out.intercept = fit.intercept;
    out.stderr_slope = fit.stderr_slope;
    out.r_squared = fit.r_squared;
    return out;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile: empty sample");
    if (q < 0 || q > 1) throw std::invalid_argument("quantile: q outside [0,1]");
    std::sort(values.begin(), values.end());
    double pos = q * static_cast<double>(values.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

namespace {

ScalingEstimate summarize(const ExperimentPlan& plan, Target target,
                          std::map<int, std::vector<double>> cells, bool log_requires_positive) {
    ScalingEstimate est;
    est.target = target;
    std::vector<FitPoint> points;
    for (int k : plan.k_list) {
        auto it = cells.find(k);
        if (it == cells.end() || static_cast<int>(it->second.size()) < plan.replicates)
            throw std::invalid_argument("estimate: missing replicates for k=" + std::to_string(k));
        double summary = quantile(it->second, plan.quantile_q);
        est.per_scale.push_back({k, summary, static_cast<int>(it->second.size())});
        if (k < plan.min_fit_k) {
            est.warnings.push_back("k=" + std::to_string(k) + " excluded from fit");
            continue;
        }
        if (log_requires_positive && summary <= 0) {
            est.warnings.push_back("k=" + std::to_string(k) + " dropped: zero quantile");
            continue;
        }
        points.push_back({k * kLog2, std::log(summary)});
    }
    if (points.size() < 3) {
        est.status = EstimateStatus::insufficient_signal;
        est.exponent = std::numeric_limits<double>::quiet_NaN();
        est.stderr_exp = std::numeric_limits<double>::quiet_NaN();
        est.r_squared = 0;
        return est;
    }
    ScalingFit fit = fit_loglog(points, target);
    est.exponent = fit.exponent;
    est.stderr_exp = fit.stderr_slope;
    est.r_squared = fit.r_squared;
    return est;
}

std::vector<CrossingRecord> records_at_xi(const std::vector<CrossingRecord>& records, double xi) {
    std::vector<CrossingRecord> out;
    for (const auto& r : records)
        if (same_xi(r.xi, xi)) out.push_back(r);
    return out;
}

}  // namespace

ScalingEstimate estimate_lambda(const ExperimentPlan& plan,
                                const std::vector<CrossingRecord>& records, double xi) {
    validate_plan(plan);
    auto mine = records_at_xi(records, xi);
    auto cells = group_by_k(mine, [](const CrossingRecord& r) { return r.distance; });
    return summarize(plan, Target::lambda, std::move(cells), true);
}

ScalingEstimate estimate_g(const ExperimentPlan& plan, const std::vector<CrossingRecord>& records,
                           double xi) {
    validate_plan(plan);
    auto mine = records_at_xi(records, xi);
    auto cells = group_by_k(mine, [](const CrossingRecord& r) {
        return static_cast<double>(r.vertex_count);
    });
    return summarize(plan, Target::g, std::move(cells), true);
}

ScalingEstimate estimate_census_exponent(const ExperimentPlan& plan, double alpha,
                                         const std::vector<CensusRecord>& records) {
    if (!(alpha > 0)) throw std::domain_error("estimate_census_exponent: alpha must be positive");
    std::vector<CensusRecord> mine;
    for (const auto& r : records)
        if (same_xi(r.alpha, alpha)) mine.push_back(r);
    std::map<int, std::vector<double>> cells;
    for (const auto& r : mine) cells[r.k].push_back(static_cast<double>(r.count));
    // zero-count medians are expected at strong thresholds; cells are dropped
    // rather than erroring, and too few survivors reports insufficient signal
    ScalingEstimate est;
    est.target = Target::census;
    std::vector<FitPoint> points;
    for (int k : plan.k_list) {
        auto it = cells.find(k);
        if (it == cells.end()) continue;
        double summary = quantile(it->second, plan.quantile_q);
        est.per_scale.push_back({k, summary, static_cast<int>(it->second.size())});
        if (k < plan.min_fit_k) {
            est.warnings.push_back("k=" + std::to_string(k) + " excluded from fit");
            continue;
        }
        if (summary <= 0) {
            est.warnings.push_back("k=" + std::to_string(k) + " dropped: zero median count");
            continue;
        }
        points.push_back({k * kLog2, std::log(summary)});
    }
    if (points.size() < 3) {
        est.status = EstimateStatus::insufficient_signal;
        est.exponent = std::numeric_limits<double>::quiet_NaN();
        est.stderr_exp = std::numeric_limits<double>::quiet_NaN();
        est.r_squared = 0;
        return est;
    }
    ScalingFit fit = fit_loglog(points, Target::census);
    est.exponent = fit.exponent;
    est.stderr_exp = fit.stderr_slope;
    est.r_squared = fit.r_squared;
    return est;
}

Thm21Report theorem21_check(const ExperimentPlan& plan, double xi, double xi_tilde,
                            const std::vector<CrossingRecord>& records) {
    if (!(xi_tilde >= 0 && xi_tilde <= xi))
        throw std::invalid_argument("theorem21_check: need 0 <= xi_tilde <= xi");
    ScalingEstimate lam = estimate_lambda(plan, records, xi);

    auto mine = records_at_xi(records, xi);
    std::map<int, std::vector<double>> cells;
    for (const auto& r : mine) {
        for (std::size_t i = 0; i < r.multi_xi.size(); ++i) {
            if (same_xi(r.multi_xi[i], xi_tilde)) {
                cells[r.k].push_back(r.multi_lengths[i]);
                break;
            }
        }
    }
    std::vector<FitPoint> points;
    for (int k : plan.k_list) {
        auto it = cells.find(k);
        if (it == cells.end() || static_cast<int>(it->second.size()) < plan.replicates)
            throw std::invalid_argument("theorem21_check: missing multi-xi lengths for k=" +
                                        std::to_string(k));
        if (k < plan.min_fit_k) continue;
        points.push_back({k * kLog2, std::log(quantile(it->second, plan.quantile_q))});
    }
    ScalingFit fit = fit_loglog(points, Target::lambda);

    Thm21Report report;
    report.xi = xi;
    report.xi_tilde = xi_tilde;
    report.lambda_hat = lam.exponent;
    report.fitted_exponent = fit.exponent;
    report.bound_exponent = bounds::length_compare_exponent(xi, xi_tilde, lam.exponent);
    report.margin = report.fitted_exponent - (report.bound_exponent - plan.slack_lambda_g);
    report.pass = report.margin >= 0;
    return report;
}

}  // namespace lfpp::estimate
