#include "lfpp/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <limits>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "lfpp/bounds.hpp"
#include "lfpp/engine.hpp"
#include "lfpp/io.hpp"
#include "lfpp/rng.hpp"

namespace lfpp::run {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

struct Task {
    int k = 0;
    int rep = 0;
};

struct TaskOutput {
    std::vector<estimate::CrossingRecord> crossings;
    std::vector<estimate::CensusRecord> census;
};

std::uint64_t task_seed(const estimate::ExperimentPlan& plan, const Task& task) {
    return rng::combine({plan.master_seed, static_cast<std::uint64_t>(plan.sampler),
                         static_cast<std::uint64_t>(task.k),
                         static_cast<std::uint64_t>(task.rep)});
}

TaskOutput run_task(const estimate::ExperimentPlan& plan, const Task& task) {
    std::uint64_t seed = task_seed(plan, task);
    auto spec = field::make_grid(task.k, plan.padding_factor);
    field::FieldSample sample = field::sample(plan.sampler, spec, seed);
    engine::FieldView view = engine::view_of(sample);

    TaskOutput out;
    out.crossings.reserve(plan.xi_list.size());
    for (double xi : plan.xi_list) {
        engine::CrossingResult res = engine::crossing_distance(view, xi);
        estimate::CrossingRecord rec;
        rec.xi = xi;
        rec.k = task.k;
        rec.seed = seed;
        rec.sampler = plan.sampler;
        rec.distance = res.distance;
        rec.vertex_count = res.vertex_count;
        if (!plan.multi_xi.empty()) {
            rec.multi_xi = plan.multi_xi;
            rec.multi_lengths = engine::multi_xi_evaluate(res.geodesic, view, plan.multi_xi);
        }
        if (plan.store_geodesics) rec.geodesic = res.geodesic.vertices;
        out.crossings.push_back(std::move(rec));
    }
    for (double alpha : plan.census_alphas) {
        engine::CensusResult res = engine::census(view, alpha);
        estimate::CensusRecord rec;
        rec.k = task.k;
        rec.seed = seed;
        rec.sampler = plan.sampler;
        rec.alpha = res.alpha;
        rec.count = res.count;
        out.census.push_back(rec);
    }
    return out;
}

std::string iso_utc_now() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

std::uint64_t memory_estimate(const estimate::ExperimentPlan& plan, int workers) {
    int k_max = 0;
    for (int k : plan.k_list) k_max = std::max(k_max, k);
    std::uint64_t cells = 1ULL << (2 * k_max);  // 4^k
    std::uint64_t per_sampler;
    switch (plan.sampler) {
        case field::SamplerKind::exact_dgff: per_sampler = cells * 200; break;
        case field::SamplerKind::fourier: per_sampler = cells * 360; break;
        default: per_sampler = cells * 40; break;
    }
    std::uint64_t grid = static_cast<std::uint64_t>((1ULL << k_max) + 1);
    std::uint64_t per_engine = grid * grid * 64;
    return static_cast<std::uint64_t>(workers) * (per_sampler + per_engine);
}

SimulateOutcome run_simulate(const estimate::ExperimentPlan& plan, int workers,
                             std::uint64_t memory_budget) {
    estimate::validate_plan(plan);
    if (workers < 1) throw std::invalid_argument("run_simulate: workers must be positive");
    std::uint64_t need = memory_estimate(plan, workers);
    if (need > memory_budget)
        throw std::runtime_error("run_simulate: estimated memory " + std::to_string(need) +
                                 " bytes exceeds budget " + std::to_string(memory_budget));

    std::vector<Task> tasks;
    for (int k : plan.k_list)
        for (int rep = 0; rep < plan.replicates; ++rep) tasks.push_back({k, rep});

    auto t0 = std::chrono::steady_clock::now();
    std::vector<TaskOutput> outputs(tasks.size());
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto body = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                outputs[i] = run_task(plan, tasks[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    int pool = std::min<std::size_t>(workers, std::max<std::size_t>(tasks.size(), 1));
    if (pool <= 1) {
        body();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(pool);
        for (int i = 0; i < pool; ++i) threads.emplace_back(body);
        for (auto& t : threads) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    SimulateOutcome outcome;
    for (auto& out : outputs) {
        for (auto& rec : out.crossings) outcome.crossings.push_back(std::move(rec));
        for (auto& rec : out.census) outcome.census.push_back(rec);
    }
    outcome.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return outcome;
}

std::string plan_to_json(const estimate::ExperimentPlan& plan) {
    json j;
    j["xi_list"] = plan.xi_list;
    j["k_list"] = plan.k_list;
    j["replicates"] = plan.replicates;
    j["sampler"] = field::sampler_name(plan.sampler);
    j["master_seed"] = plan.master_seed;
    j["quantile_q"] = plan.quantile_q;
    j["slack_lambda_g"] = plan.slack_lambda_g;
    j["slack_census"] = plan.slack_census;
    j["min_fit_k"] = plan.min_fit_k;
    j["padding_factor"] = plan.padding_factor;
    j["store_geodesics"] = plan.store_geodesics;
    j["multi_xi"] = plan.multi_xi;
    j["census_alphas"] = plan.census_alphas;
    return j.dump();
}

estimate::ExperimentPlan plan_from_json(const std::string& text) {
    json j = json::parse(text);
    estimate::ExperimentPlan plan;
    plan.xi_list = j.at("xi_list").get<std::vector<double>>();
    plan.k_list = j.at("k_list").get<std::vector<int>>();
    plan.replicates = j.at("replicates").get<int>();
    plan.sampler = field::sampler_from_name(j.at("sampler").get<std::string>());
    plan.master_seed = j.at("master_seed").get<std::uint64_t>();
    plan.quantile_q = j.value("quantile_q", 0.5);
    plan.slack_lambda_g = j.value("slack_lambda_g", 0.15);
    plan.slack_census = j.value("slack_census", 0.3);
    plan.min_fit_k = j.value("min_fit_k", 4);
    plan.padding_factor = j.value("padding_factor", 1.0);
    plan.store_geodesics = j.value("store_geodesics", false);
    plan.multi_xi = j.value("multi_xi", std::vector<double>{});
    plan.census_alphas = j.value("census_alphas", std::vector<double>{});
    return plan;
}

void write_simulation(const std::string& out_dir, const std::string& subcommand,
                      const estimate::ExperimentPlan& plan, int workers,
                      const SimulateOutcome& outcome) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    std::string records_text;
    for (const auto& rec : outcome.crossings)
        records_text += io::crossing_record_json(rec, plan.store_geodesics) + "\n";
    std::string census_text;
    for (const auto& rec : outcome.census) census_text += io::census_record_json(rec) + "\n";

    json manifest;
    manifest["tool"] = "lfpp-lab";
    manifest["version"] = kVersion;
    manifest["subcommand"] = subcommand;
    manifest["plan"] = json::parse(plan_to_json(plan));
    manifest["workers"] = workers;
    json outputs = json::object();
    if (!plan.xi_list.empty()) {
        io::write_text_file(out_dir + "/records.jsonl", records_text);
        outputs["records"] = "records.jsonl";
    }
    if (!plan.census_alphas.empty()) {
        io::write_text_file(out_dir + "/census.jsonl", census_text);
        outputs["census"] = "census.jsonl";
    }
    if (plan.store_geodesics) {
        fs::create_directories(out_dir + "/geodesics");
        std::size_t idx = 0;
        for (const auto& rec : outcome.crossings) {
            int n = (1 << rec.k) + 1;
            double eps = std::ldexp(1.0, -rec.k);
            std::vector<std::pair<double, double>> pts;
            pts.reserve(rec.geodesic.size());
            for (std::int32_t v : rec.geodesic)
                pts.emplace_back((v % n) * eps, (v / n) * eps);
            io::write_text_file(out_dir + "/geodesics/path_" + std::to_string(idx) + ".csv",
                                io::xy_csv(pts, "x", "y"));
            ++idx;
        }
        outputs["geodesics"] = "geodesics/";
    }
    manifest["outputs"] = outputs;
    json calibration = json::object();
    if (plan.sampler == field::SamplerKind::fourier)
        calibration["fourier_c0"] = field::fourier_calibration_c0(plan.padding_factor);
    manifest["calibration"] = calibration;
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(io::fnv1a64(records_text + census_text)));
    manifest["content_hash"] = hash;
    manifest["wall_seconds"] = outcome.wall_seconds;
    manifest["completed_utc"] = iso_utc_now();
    io::write_text_file(out_dir + "/manifest.json", manifest.dump(2) + "\n");
}

LoadedRun load_run(const std::string& dir) {
    LoadedRun run;
    json manifest = json::parse(io::read_text_file(dir + "/manifest.json"));
    run.plan = plan_from_json(manifest.at("plan").dump());
    auto outputs = manifest.at("outputs");
    if (outputs.contains("records"))
        for (const auto& line : io::read_lines(dir + "/" + outputs["records"].get<std::string>()))
            run.crossings.push_back(io::parse_crossing_record(line));
    if (outputs.contains("census"))
        for (const auto& line : io::read_lines(dir + "/" + outputs["census"].get<std::string>()))
            run.census.push_back(io::parse_census_record(line));
    return run;
}

namespace {

constexpr const char* kEstimatesHeader =
    "xi,lambda_hat,lambda_stderr,lambda_r2,g_hat,g_stderr,g_r2,lambda_band_lo,lambda_band_hi,"
    "lambda_in_band,g_bound,g_in_band";

std::string flag(bool b) { return b ? "1" : "0"; }

}  // namespace

EstimateFiles run_estimate(const LoadedRun& run) {
    EstimateFiles files;
    const auto& plan = run.plan;

    std::set<double> xi_seen;
    for (const auto& rec : run.crossings) xi_seen.insert(rec.xi);

    files.estimates_csv = kEstimatesHeader;
    files.estimates_csv += '\n';
    for (double xi : xi_seen) {
        auto lam = estimate::estimate_lambda(plan, run.crossings, xi);
        auto g = estimate::estimate_g(plan, run.crossings, xi);
        double lo = bounds::lambda_lower(xi) - plan.slack_lambda_g;
        double hi = bounds::lambda_upper(xi) + plan.slack_lambda_g;
        bool lam_ok = lam.status == estimate::EstimateStatus::ok && lam.exponent >= lo &&
                      lam.exponent <= hi;
        double g_bound = std::numeric_limits<double>::quiet_NaN();
        bool g_ok = false;
        if (xi > 0 && lam.status == estimate::EstimateStatus::ok) {
            g_bound = bounds::g_upper(xi, lam.exponent) + plan.slack_lambda_g;
            g_ok = g.status == estimate::EstimateStatus::ok && g.exponent <= g_bound;
        } else if (xi == 0) {
            g_bound = 1.0 + plan.slack_lambda_g;
            g_ok = g.status == estimate::EstimateStatus::ok && g.exponent <= g_bound;
        }
        const std::string cells[] = {io::format_g12(xi),
                                     io::format_g12(lam.exponent),
                                     io::format_g12(lam.stderr_exp),
                                     io::format_g12(lam.r_squared),
                                     io::format_g12(g.exponent),
                                     io::format_g12(g.stderr_exp),
                                     io::format_g12(g.r_squared),
                                     io::format_g12(lo),
                                     io::format_g12(hi),
                                     flag(lam_ok),
                                     io::format_g12(g_bound),
                                     flag(g_ok)};
        for (std::size_t i = 0; i < std::size(cells); ++i) {
            if (i) files.estimates_csv += ',';
            files.estimates_csv += cells[i];
        }
        files.estimates_csv += '\n';
    }

    std::set<double> alphas;
    for (const auto& rec : run.census) alphas.insert(rec.alpha);
    if (!alphas.empty()) {
        files.census_csv = "alpha,c_hat,stderr,r2,bound,pass,status\n";
        for (double alpha : alphas) {
            auto est = estimate::estimate_census_exponent(plan, alpha, run.census);
            double bound = 2.0 - alpha * alpha / 2.0 + plan.slack_census;
            bool ok = est.status == estimate::EstimateStatus::ok;
            bool pass = ok && est.exponent <= bound;
            files.census_csv += io::format_g12(alpha) + "," + io::format_g12(est.exponent) + "," +
                                io::format_g12(est.stderr_exp) + "," +
                                io::format_g12(est.r_squared) + "," + io::format_g12(bound) + "," +
                                flag(pass) + "," + (ok ? "ok" : "insufficient_signal") + "\n";
        }
    }

    if (!plan.multi_xi.empty() && !xi_seen.empty()) {
        files.thm21_csv = "xi,xi_tilde,lambda_hat,fitted_exponent,bound_exponent,margin,pass\n";
        for (double xi : xi_seen) {
            for (double xt : plan.multi_xi) {
                if (!(xt >= 0 && xt <= xi)) continue;
                auto rep = estimate::theorem21_check(plan, xi, xt, run.crossings);
                files.thm21_csv += io::format_g12(rep.xi) + "," + io::format_g12(rep.xi_tilde) +
                                   "," + io::format_g12(rep.lambda_hat) + "," +
                                   io::format_g12(rep.fitted_exponent) + "," +
                                   io::format_g12(rep.bound_exponent) + "," +
                                   io::format_g12(rep.margin) + "," + flag(rep.pass) + "\n";
            }
        }
    }
    return files;
}

void write_estimates(const std::string& out_dir, const EstimateFiles& files) {
    std::filesystem::create_directories(out_dir);
    io::write_text_file(out_dir + "/estimates.csv", files.estimates_csv);
    if (!files.census_csv.empty())
        io::write_text_file(out_dir + "/census_estimates.csv", files.census_csv);
    if (!files.thm21_csv.empty()) io::write_text_file(out_dir + "/thm21.csv", files.thm21_csv);
}

BoundsGrids bounds_grids(double xi_min, double xi_max, double xi_step, double gamma_min,
                         double gamma_max, double gamma_step, bool insert_knots) {
    if (!(xi_step > 0) || !(gamma_step > 0))
        throw std::invalid_argument("bounds_grids: steps must be positive");
    BoundsGrids grids;
    std::set<double> xs;
    for (double x = xi_min; x <= xi_max + 1e-12 * xi_step; x += xi_step) xs.insert(x);
    if (insert_knots)
        for (double v : {bounds::xi_knot(), 1.0 / std::sqrt(3.0), 1.0})
            if (v >= xi_min && v <= xi_max) xs.insert(v);
    grids.xi = {xs.begin(), xs.end()};

    std::set<double> gs;
    for (double g = gamma_min; g <= gamma_max + 1e-12 * gamma_step; g += gamma_step)
        if (g > 0 && g <= 2.0) gs.insert(g);
    if (insert_knots)
        for (double v : {bounds::gamma_knot(), std::sqrt(2.0)})
            if (v >= gamma_min && v <= gamma_max) gs.insert(v);
    grids.gamma = {gs.begin(), gs.end()};
    return grids;
}

void write_bounds_tables(const std::string& out_dir, const BoundsGrids& grids) {
    std::filesystem::create_directories(out_dir);
    std::vector<bounds::BoundsRow> xi_rows;
    xi_rows.reserve(grids.xi.size());
    for (double x : grids.xi) xi_rows.push_back(bounds::bounds_row(x));
    std::vector<bounds::GammaRow> gamma_rows;
    gamma_rows.reserve(grids.gamma.size());
    for (double g : grids.gamma) gamma_rows.push_back(bounds::gamma_row(g));
    io::write_text_file(out_dir + "/bounds_xi.csv", io::bounds_rows_csv(xi_rows));
    io::write_text_file(out_dir + "/bounds_gamma.csv", io::gamma_rows_csv(gamma_rows));
}

namespace {

std::vector<svg::OverlayPoint> overlays_from_csv(const std::string& estimates_csv, int value_col,
                                                 int err_col) {
    auto table = io::parse_csv(estimates_csv);
    std::vector<svg::OverlayPoint> points;
    for (std::size_t i = 1; i < table.size(); ++i) {
        const auto& row = table[i];
        if (static_cast<int>(row.size()) <= std::max(value_col, err_col)) continue;
        svg::OverlayPoint p;
        p.x = std::stod(row[0]);
        p.y = std::stod(row[value_col]);
        p.err = std::stod(row[err_col]);
        if (std::isfinite(p.x) && std::isfinite(p.y)) points.push_back(p);
    }
    return points;
}

}  // namespace

std::vector<svg::OverlayPoint> lambda_overlays(const std::string& estimates_csv) {
    return overlays_from_csv(estimates_csv, 1, 2);
}

std::vector<svg::OverlayPoint> g_overlays(const std::string& estimates_csv) {
    return overlays_from_csv(estimates_csv, 4, 5);
}

}  // namespace lfpp::run
