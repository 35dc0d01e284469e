#pragma once

#include <cstdint>
#include <vector>

#include "lfpp/field.hpp"

// LFPP lengths, crossing distances, geodesics, the threshold census and the
// path-split decomposition. Vertex weights: w(v) = eps * exp(xi * h(v)); a
// path's length sums the weight of every vertex on it, both endpoints
// included. The engine operates on any rectangular field array; FieldSample
// provides a view of its grid.

namespace lfpp::engine {

struct FieldView {
    const double* values = nullptr;
    int rows = 0;
    int cols = 0;
    double eps = 0;

    std::size_t size() const { return static_cast<std::size_t>(rows) * cols; }
};

inline FieldView view_of(const field::FieldSample& s) {
    return {s.values.data(), s.spec.n_per_side, s.spec.n_per_side, s.spec.epsilon};
}

struct PathRecord {
    std::vector<std::int32_t> vertices;  // row-major indices, in path order
    bool is_simple = true;
    std::vector<double> field_values;
};

struct CrossingResult {
    double xi = 0;
    double distance = 0;
    PathRecord geodesic;
    std::int64_t vertex_count = 0;
};

struct CensusResult {
    double alpha = 0;
    std::int64_t count = 0;
    double epsilon = 0;
};

struct PathSplit {
    std::int64_t low_count = 0;  // path vertices with h < alpha*log(eps)
    double low_term = 0;         // eps^(1 + alpha*xi_tilde) * low_count
    double high_term = 0;        // exact length contribution of the rest
};

double lfpp_length(const std::vector<std::int32_t>& path, const FieldView& f, double xi);

// Minimal length over lattice paths joining the left and right boundary
// columns. Deterministic: equal tentative values resolve to the smaller
// row-major index at extraction, equal-length predecessors to the smaller
// predecessor index.
CrossingResult crossing_distance(const FieldView& f, double xi);

struct PointResult {
    double distance = 0;
    PathRecord path;
};

PointResult point_distance(const FieldView& f, double xi, int r0, int c0, int r1, int c1);

CensusResult census(const FieldView& f, double alpha);

PathSplit path_split(const std::vector<std::int32_t>& path, const FieldView& f,
                     double xi_tilde, double alpha);

std::vector<double> multi_xi_evaluate(const PathRecord& geodesic, const FieldView& f,
                                      const std::vector<double>& xi_list);

}  // namespace lfpp::engine
