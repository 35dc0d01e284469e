#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lfpp/estimator.hpp"
#include "lfpp/svg.hpp"

// Experiment execution and persistence. Replicate tasks run on a worker pool
// with counter-based seeds and are serialized in task order, so every output
// byte except manifest timing is fixed by (plan, master_seed) alone.

namespace lfpp::run {

struct SimulateOutcome {
    std::vector<estimate::CrossingRecord> crossings;
    std::vector<estimate::CensusRecord> census;
    double wall_seconds = 0;
};

// bytes the largest scheduled scale needs across all workers
std::uint64_t memory_estimate(const estimate::ExperimentPlan& plan, int workers);

SimulateOutcome run_simulate(const estimate::ExperimentPlan& plan, int workers,
                             std::uint64_t memory_budget = 2ULL << 30);

// writes records.jsonl (when the plan has xi values), census.jsonl (when it
// has census thresholds), optional geodesic CSV dumps, and manifest.json
void write_simulation(const std::string& out_dir, const std::string& subcommand,
                      const estimate::ExperimentPlan& plan, int workers,
                      const SimulateOutcome& outcome);

std::string plan_to_json(const estimate::ExperimentPlan& plan);
estimate::ExperimentPlan plan_from_json(const std::string& text);

struct LoadedRun {
    estimate::ExperimentPlan plan;
    std::vector<estimate::CrossingRecord> crossings;
    std::vector<estimate::CensusRecord> census;
};

LoadedRun load_run(const std::string& dir);

struct EstimateFiles {
    std::string estimates_csv;  // per-xi lambda and g estimates with band flags
    std::string census_csv;     // per-alpha census exponents, empty if no census
    std::string thm21_csv;      // length-comparison checks, empty if no multi-xi
};

EstimateFiles run_estimate(const LoadedRun& run);
void write_estimates(const std::string& out_dir, const EstimateFiles& files);

struct BoundsGrids {
    std::vector<double> xi;
    std::vector<double> gamma;
};

BoundsGrids bounds_grids(double xi_min, double xi_max, double xi_step, double gamma_min,
                         double gamma_max, double gamma_step, bool insert_knots);
void write_bounds_tables(const std::string& out_dir, const BoundsGrids& grids);

// overlay points (xi, estimate, stderr) pulled out of an estimates CSV
std::vector<svg::OverlayPoint> lambda_overlays(const std::string& estimates_csv);
std::vector<svg::OverlayPoint> g_overlays(const std::string& estimates_csv);

}  // namespace lfpp::run
