// Python bindings: the closed-form bounds, field sampling into numpy arrays,
// crossing distances and the census on caller-supplied fields, and a small
// seeded simulation driver returning records as dicts.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <stdexcept>

#include "lfpp/bounds.hpp"
#include "lfpp/engine.hpp"
#include "lfpp/field.hpp"
#include "lfpp/runner.hpp"

namespace py = pybind11;
using namespace lfpp;

namespace {

engine::FieldView view_of_array(const py::array_t<double, py::array::c_style>& arr,
                                double eps) {
    if (arr.ndim() != 2 || arr.shape(0) != arr.shape(1))
        throw std::invalid_argument("field must be a square 2d array");
    int n = static_cast<int>(arr.shape(0));
    if (n < 2) throw std::invalid_argument("field must be at least 2x2");
    if (!(eps > 0)) eps = 1.0 / (n - 1);
    return {arr.data(), n, n, eps};
}

py::dict record_to_dict(const estimate::CrossingRecord& rec) {
    py::dict d;
    d["xi"] = rec.xi;
    d["k"] = rec.k;
    d["seed"] = rec.seed;
    d["sampler"] = field::sampler_name(rec.sampler);
    d["distance"] = rec.distance;
    d["vertex_count"] = rec.vertex_count;
    if (!rec.multi_xi.empty()) {
        d["multi_xi"] = rec.multi_xi;
        d["multi_lengths"] = rec.multi_lengths;
    }
    return d;
}

}  // namespace

PYBIND11_MODULE(lfpp_lab, m) {
    m.doc() = "Liouville first passage percolation: bounds, fields and crossings";

    m.def("lambda_lower", &bounds::lambda_lower, py::arg("xi"));
    m.def("lambda_upper", &bounds::lambda_upper, py::arg("xi"));
    m.def("watabiki_lambda_ext", &bounds::watabiki_lambda_ext, py::arg("xi"));
    m.def("dg_guess_lambda", &bounds::dg_guess_lambda, py::arg("xi"));
    m.def("watabiki_d", &bounds::watabiki_d, py::arg("gamma"));
    m.def("dg_guess_d", &bounds::dg_guess_d, py::arg("gamma"));
    m.def("d_lower", &bounds::d_lower, py::arg("gamma"));
    m.def("d_upper", &bounds::d_upper, py::arg("gamma"));
    m.def("lambda_from_gamma", &bounds::lambda_from_gamma, py::arg("gamma"), py::arg("d"));
    m.def("alpha_star", &bounds::alpha_star, py::arg("xi"), py::arg("lam"));
    m.def("length_compare_exponent", &bounds::length_compare_exponent, py::arg("xi"),
          py::arg("xi_tilde"), py::arg("lam"));
    m.def("g_upper", &bounds::g_upper, py::arg("xi"), py::arg("lam"));
    m.def("geodesic_gamma_bound", &bounds::geodesic_gamma_bound, py::arg("gamma"),
          py::arg("d"));
    m.def("q_of", &bounds::q_of, py::arg("xi"), py::arg("lam"));
    m.def("c_of", &bounds::c_of, py::arg("xi"), py::arg("lam"));
    m.def("xi_knot", &bounds::xi_knot);
    m.def("gamma_knot", &bounds::gamma_knot);
    m.def("contradiction_interval", &bounds::contradiction_interval);
    m.def("q_mono_threshold", &bounds::q_mono_threshold);

    m.def(
        "sample_field",
        [](const std::string& sampler, int k, std::uint64_t seed, double padding) {
            auto spec = field::make_grid(k, padding);
            auto s = field::sample(field::sampler_from_name(sampler), spec, seed);
            int n = spec.n_per_side;
            py::array_t<double> arr({n, n});
            std::copy(s.values.begin(), s.values.end(), arr.mutable_data());
            return arr;
        },
        py::arg("sampler"), py::arg("k"), py::arg("seed"), py::arg("padding") = 1.0,
        "Draw one field as an (n, n) array, n = 2^k + 1.");

    m.def(
        "crossing_distance",
        [](const py::array_t<double, py::array::c_style>& field, double xi, double eps) {
            auto res = engine::crossing_distance(view_of_array(field, eps), xi);
            py::dict d;
            d["distance"] = res.distance;
            d["vertex_count"] = res.vertex_count;
            d["geodesic"] = res.geodesic.vertices;
            return d;
        },
        py::arg("field"), py::arg("xi"), py::arg("eps") = 0.0,
        "Left-right crossing distance; eps defaults to 1/(n-1).");

    m.def(
        "census_count",
        [](const py::array_t<double, py::array::c_style>& field, double alpha, double eps) {
            return engine::census(view_of_array(field, eps), alpha).count;
        },
        py::arg("field"), py::arg("alpha"), py::arg("eps") = 0.0,
        "Number of vertices with h(z) < alpha * log(eps).");

    m.def(
        "simulate",
        [](const std::vector<double>& xi_list, const std::vector<int>& k_list, int reps,
           const std::string& sampler, std::uint64_t seed, int workers) {
            estimate::ExperimentPlan plan;
            plan.xi_list = xi_list;
            plan.k_list = k_list;
            plan.replicates = reps;
            plan.sampler = field::sampler_from_name(sampler);
            plan.master_seed = seed;
            auto outcome = run::run_simulate(plan, workers);
            py::list records;
            for (const auto& rec : outcome.crossings) records.append(record_to_dict(rec));
            return records;
        },
        py::arg("xi_list"), py::arg("k_list"), py::arg("reps") = 1,
        py::arg("sampler") = "fourier", py::arg("seed") = 1, py::arg("workers") = 1,
        "Seeded crossing replicates; returns one dict per (k, rep, xi).");
}
