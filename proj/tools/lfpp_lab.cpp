// lfpp_lab: analytic bound tables, seeded crossing simulations, exponent
// fits, the low-field census and SVG figures, from one CLI.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lfpp/bounds.hpp"
#include "lfpp/estimator.hpp"
#include "lfpp/io.hpp"
#include "lfpp/runner.hpp"
#include "lfpp/svg.hpp"

using namespace lfpp;

namespace {

template <typename T>
std::vector<T> sorted_unique(std::vector<T> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

void report_estimates(const run::EstimateFiles& files, const std::string& dir) {
    std::cout << "wrote " << dir << "/estimates.csv\n";
    if (!files.census_csv.empty()) std::cout << "wrote " << dir << "/census_estimates.csv\n";
    if (!files.thm21_csv.empty()) std::cout << "wrote " << dir << "/thm21.csv\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LFPP laboratory: bound tables, simulations, fits and figures"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "INI config, one section per subcommand; command-line flags win");
    app.allow_config_extras(true);

    std::string out_dir = "out";
    std::uint64_t seed = 1;
    int workers = 1;
    app.add_option("--out", out_dir, "output directory")
        ->envname("LFPP_LAB_OUT")
        ->capture_default_str();
    app.add_option("--seed", seed, "master seed")->capture_default_str();
    app.add_option("--workers", workers, "worker thread count")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    // bounds
    auto* bounds_cmd = app.add_subcommand("bounds", "tabulate the analytic curves as CSV");
    bounds_cmd->fallthrough();
    double xi_min = 0.0, xi_max = 1.5, xi_step = 0.01;
    double gamma_min = 0.05, gamma_max = 2.0, gamma_step = 0.01;
    bool insert_knots = false;
    bounds_cmd->add_option("--xi-min", xi_min)->capture_default_str();
    bounds_cmd->add_option("--xi-max", xi_max)->capture_default_str();
    bounds_cmd->add_option("--xi-step", xi_step)->capture_default_str();
    bounds_cmd->add_option("--gamma-min", gamma_min)->capture_default_str();
    bounds_cmd->add_option("--gamma-max", gamma_max)->capture_default_str();
    bounds_cmd->add_option("--gamma-step", gamma_step)->capture_default_str();
    bounds_cmd->add_flag("--insert-knots", insert_knots,
                         "add the branch points of the bounds to the grids");

    // simulate / census share the replicate options
    std::vector<double> xi_list, multi_xi, census_alphas;
    std::vector<int> k_list;
    int reps = 1;
    std::string sampler = "fourier";
    double quantile = 0.5, slack_lambda_g = 0.15, slack_census = 0.3, padding = 1.0;
    int min_fit_k = 4;
    bool store_geodesics = false;
    std::uint64_t memory_budget = 2ULL << 30;

    auto add_replicate_options = [&](CLI::App* cmd) {
        cmd->fallthrough();
        cmd->add_option("--k", k_list, "grid levels (n = 2^k + 1)")
            ->delimiter(',')
            ->required();
        cmd->add_option("--reps", reps, "replicates per level")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--sampler", sampler, "field sampler")
            ->check(CLI::IsMember({"exact", "fourier", "layered"}))
            ->capture_default_str();
        cmd->add_option("--census-alpha", census_alphas, "census thresholds alpha")
            ->delimiter(',');
        cmd->add_option("--quantile", quantile, "per-scale summary quantile")
            ->capture_default_str();
        cmd->add_option("--min-fit-k", min_fit_k, "smallest level used by the fits")
            ->capture_default_str();
        cmd->add_option("--slack-lambda-g", slack_lambda_g)->capture_default_str();
        cmd->add_option("--slack-census", slack_census)->capture_default_str();
        cmd->add_option("--padding", padding, "sampler padding factor")->capture_default_str();
        cmd->add_option("--memory-budget", memory_budget, "refusal threshold in bytes")
            ->capture_default_str();
        cmd->add_flag("--store-geodesics", store_geodesics,
                      "keep geodesic vertex lists and xy dumps");
    };

    auto* sim_cmd = app.add_subcommand("simulate", "run seeded crossing replicates");
    add_replicate_options(sim_cmd);
    sim_cmd->add_option("--xi", xi_list, "LFPP parameters xi")->delimiter(',');
    sim_cmd->add_option("--multi-xi", multi_xi,
                        "extra xi values evaluated along each geodesic")
        ->delimiter(',');

    auto* census_cmd =
        app.add_subcommand("census", "count vertices below the field threshold only");
    add_replicate_options(census_cmd);

    // estimate
    auto* est_cmd =
        app.add_subcommand("estimate", "fit scaling exponents from a simulation directory");
    est_cmd->fallthrough();
    std::string run_dir;
    est_cmd->add_option("run_dir", run_dir,
                        "simulation output directory (defaults to --out); estimates are "
                        "written next to their input");

    // plot
    auto* plot_cmd = app.add_subcommand("plot", "render a figure as SVG");
    plot_cmd->fallthrough();
    std::string figure;
    double fig_min = std::nan(""), fig_max = std::nan("");
    std::string estimates_path, prev_lower_path, prev_upper_path;
    plot_cmd->add_option("figure", figure, "figure id")
        ->required()
        ->check(CLI::IsMember({"lambda_bounds", "d_bounds", "g_bound"}));
    plot_cmd->add_option("--min", fig_min, "range start (xi or gamma)");
    plot_cmd->add_option("--max", fig_max, "range end");
    plot_cmd->add_option("--estimates", estimates_path, "estimates CSV for overlay points");
    plot_cmd->add_option("--prev-lower", prev_lower_path,
                         "xy CSV with a previously known lower bound (d_bounds only)");
    plot_cmd->add_option("--prev-upper", prev_upper_path,
                         "xy CSV with a previously known upper bound (d_bounds only)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*bounds_cmd) {
            auto grids = run::bounds_grids(xi_min, xi_max, xi_step, gamma_min, gamma_max,
                                           gamma_step, insert_knots);
            run::write_bounds_tables(out_dir, grids);
            std::cout << "wrote " << out_dir << "/bounds_xi.csv (" << grids.xi.size()
                      << " rows)\n";
            std::cout << "wrote " << out_dir << "/bounds_gamma.csv (" << grids.gamma.size()
                      << " rows)\n";
            return 0;
        }

        if (*sim_cmd || *census_cmd) {
            bool census_only = static_cast<bool>(*census_cmd);
            if (census_only && census_alphas.empty()) {
                std::cerr << "census: --census-alpha is required\n";
                return 2;
            }
            if (!census_only && xi_list.empty() && census_alphas.empty()) {
                std::cerr << "simulate: nothing to run (both --xi and --census-alpha empty)\n";
                return 2;
            }
            estimate::ExperimentPlan plan;
            plan.xi_list = census_only ? std::vector<double>{} : sorted_unique(xi_list);
            plan.k_list = sorted_unique(k_list);
            plan.replicates = reps;
            plan.sampler = field::sampler_from_name(sampler);
            plan.master_seed = seed;
            plan.quantile_q = quantile;
            plan.slack_lambda_g = slack_lambda_g;
            plan.slack_census = slack_census;
            plan.min_fit_k = min_fit_k;
            plan.padding_factor = padding;
            plan.store_geodesics = store_geodesics;
            plan.multi_xi = census_only ? std::vector<double>{} : multi_xi;
            plan.census_alphas = sorted_unique(census_alphas);

            auto outcome = run::run_simulate(plan, workers, memory_budget);
            const char* name = census_only ? "census" : "simulate";
            run::write_simulation(out_dir, name, plan, workers, outcome);
            std::cout << "wrote " << out_dir << "/manifest.json (" << outcome.crossings.size()
                      << " crossing records, " << outcome.census.size()
                      << " census records, " << io::format_g12(outcome.wall_seconds)
                      << " s)\n";
            return 0;
        }

        if (*est_cmd) {
            std::string dir = run_dir.empty() ? out_dir : run_dir;
            auto loaded = run::load_run(dir);
            auto files = run::run_estimate(loaded);
            run::write_estimates(dir, files);
            report_estimates(files, dir);
            return 0;
        }

        if (*plot_cmd) {
            svg::Figure fig;
            if (figure == "d_bounds") {
                double lo = std::isnan(fig_min) ? std::sqrt(2.0) : fig_min;
                double hi = std::isnan(fig_max) ? 2.0 : fig_max;
                lo = std::max(lo, 1e-6);  // d(gamma) lives on (0, 2]
                hi = std::min(hi, 2.0);
                if (!(lo < hi)) throw std::invalid_argument("plot: empty gamma range");
                std::vector<std::pair<double, double>> prev_lower, prev_upper;
                if (!prev_lower_path.empty())
                    prev_lower = io::parse_xy_csv(io::read_text_file(prev_lower_path));
                if (!prev_upper_path.empty())
                    prev_upper = io::parse_xy_csv(io::read_text_file(prev_upper_path));
                fig = svg::figure_d_bounds(lo, hi, prev_lower, prev_upper);
            } else {
                double lo = std::isnan(fig_min) ? 0.0 : fig_min;
                double hi = std::isnan(fig_max) ? 1.5 : fig_max;
                lo = std::max(lo, 0.0);
                if (!(lo < hi)) throw std::invalid_argument("plot: empty xi range");
                std::vector<svg::OverlayPoint> overlays;
                if (!estimates_path.empty()) {
                    std::string text = io::read_text_file(estimates_path);
                    overlays = figure == "lambda_bounds" ? run::lambda_overlays(text)
                                                         : run::g_overlays(text);
                }
                fig = figure == "lambda_bounds" ? svg::figure_lambda_bounds(lo, hi, overlays)
                                                : svg::figure_g_bound(lo, hi, overlays);
            }
            std::filesystem::create_directories(out_dir);
            std::string path = out_dir + "/" + figure + ".svg";
            io::write_text_file(path, svg::render_svg(fig));
            std::cout << "wrote " << path << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
