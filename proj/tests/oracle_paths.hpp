#pragma once

// Exhaustive simple-path reference for tiny grids. Follows the engine cost
// convention: a path pays every vertex it visits, endpoints included.

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "lfpp/engine.hpp"

namespace lfpp::oracle {

struct Enumeration {
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::int32_t> best_path;
    int ties = 0;  // paths within relative 1e-9 of best, best included
    std::size_t paths_seen = 0;
};

namespace detail {

struct Searcher {
    const double* w = nullptr;
    int rows = 0, cols = 0;
    std::vector<char> is_target;
    std::vector<char> visited;
    std::vector<std::int32_t> stack;
    Enumeration out;

    void visit(std::int32_t u, double sum) {
        stack.push_back(u);
        visited[u] = 1;
        if (is_target[u]) {
            ++out.paths_seen;
            if (sum < out.best * (1.0 - 1e-9)) {
                out.best = sum;
                out.best_path = stack;
                out.ties = 1;
            } else if (sum <= out.best * (1.0 + 1e-9)) {
                ++out.ties;
                if (sum < out.best) {
                    out.best = sum;
                    out.best_path = stack;
                }
            }
        }
        int r = u / cols, c = u % cols;
        const int dr[4] = {-1, 0, 0, 1};
        const int dc[4] = {0, -1, 1, 0};
        for (int d = 0; d < 4; ++d) {
            int nr = r + dr[d], nc = c + dc[d];
            if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) continue;
            std::int32_t v = nr * cols + nc;
            if (visited[v]) continue;
            visit(v, sum + w[v]);
        }
        visited[u] = 0;
        stack.pop_back();
    }
};

}  // namespace detail

// every simple path from any source to any target, no pruning
inline Enumeration enumerate_paths(const engine::FieldView& f, double xi,
                                   const std::vector<std::int32_t>& sources,
                                   const std::vector<std::int32_t>& targets) {
    int total = f.rows * f.cols;
    std::vector<double> w(total);
    for (int i = 0; i < total; ++i) w[i] = f.eps * std::exp(xi * f.values[i]);
    detail::Searcher s;
    s.w = w.data();
    s.rows = f.rows;
    s.cols = f.cols;
    s.is_target.assign(total, 0);
    for (auto t : targets) s.is_target[t] = 1;
    s.visited.assign(total, 0);
    for (auto src : sources) s.visit(src, w[src]);
    return s.out;
}

inline Enumeration enumerate_crossing(const engine::FieldView& f, double xi) {
    std::vector<std::int32_t> sources, targets;
    for (int r = 0; r < f.rows; ++r) {
        sources.push_back(r * f.cols);
        targets.push_back(r * f.cols + (f.cols - 1));
    }
    return enumerate_paths(f, xi, sources, targets);
}

}  // namespace lfpp::oracle
