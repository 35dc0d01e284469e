#include "lfpp/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <unordered_set>

namespace lfpp::engine {

namespace {

std::vector<double> vertex_weights(const FieldView& f, double xi) {
    if (!f.values || f.rows < 1 || f.cols < 1 || !(f.eps > 0))
        throw std::invalid_argument("field view is empty or has nonpositive eps");
    double max_abs = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!std::isfinite(f.values[i])) throw std::range_error("field contains non-finite values");
        max_abs = std::max(max_abs, std::abs(f.values[i]));
    }
    double log_eps = std::log(f.eps);
    // weights far outside double range indicate a misconfigured xi or field
    if (xi * max_abs + log_eps > 700.0)
        throw std::range_error("vertex weights overflow: xi * max|h| + log(eps) > 700");
    std::vector<double> w(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) w[i] = f.eps * std::exp(xi * f.values[i]);
    return w;
}

double kahan_sum_weights(const std::vector<std::int32_t>& path, const FieldView& f, double xi) {
    double s = 0, comp = 0;
    for (std::int32_t v : path) {
        double x = f.eps * std::exp(xi * f.values[v]);
        double y = x - comp;
        double t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    return s;
}

struct SearchOutput {
    double distance;
    std::vector<std::int32_t> path;
};

// Multi-source Dijkstra with vertex weights: tentative(v) = tentative(u) + w(v),
// sources start at their own weight. The priority queue orders by
// (tentative, index) so equal values extract the smaller index first; an
// equal-value relaxation keeps the smaller predecessor index.
SearchOutput shortest_path(const FieldView& f, const std::vector<double>& w,
                           const std::vector<std::int32_t>& sources,
                           const std::vector<std::int32_t>& targets) {
    const int rows = f.rows, cols = f.cols;
    const std::size_t n = f.size();
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, kInf);
    std::vector<std::int32_t> pred(n, -1);
    std::vector<std::uint8_t> done(n, 0);
    std::vector<std::uint8_t> is_target(n, 0);
    for (std::int32_t t : targets) is_target[t] = 1;

    using Entry = std::pair<double, std::int32_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
    for (std::int32_t s : sources) {
        if (w[s] < dist[s]) {
            dist[s] = w[s];
            queue.push({w[s], s});
        }
    }

    std::int32_t reached = -1;
    while (!queue.empty()) {
        auto [d, u] = queue.top();
        queue.pop();
        if (done[u] || d > dist[u]) continue;
        done[u] = 1;
        if (is_target[u]) {
            reached = u;
            break;
        }
        int r = u / cols, c = u % cols;
        const std::int32_t nbr[4] = {
            r > 0 ? u - cols : -1,
            c > 0 ? u - 1 : -1,
            c + 1 < cols ? u + 1 : -1,
            r + 1 < rows ? u + cols : -1,
        };
        for (std::int32_t v : nbr) {
            if (v < 0 || done[v]) continue;
            double nd = d + w[v];
            if (nd < dist[v]) {
                dist[v] = nd;
                pred[v] = u;
                queue.push({nd, v});
            } else if (nd == dist[v] && pred[v] >= 0 && u < pred[v]) {
                pred[v] = u;
            }
        }
    }
    if (reached < 0) throw std::runtime_error("shortest_path: target unreachable");

    SearchOutput out;
    out.distance = dist[reached];
    for (std::int32_t v = reached; v >= 0; v = pred[v]) out.path.push_back(v);
    std::reverse(out.path.begin(), out.path.end());
    return out;
}

PathRecord make_record(std::vector<std::int32_t> vertices, const FieldView& f) {
    PathRecord rec;
    rec.field_values.reserve(vertices.size());
    for (std::int32_t v : vertices) rec.field_values.push_back(f.values[v]);
    std::unordered_set<std::int32_t> seen(vertices.begin(), vertices.end());
    rec.is_simple = seen.size() == vertices.size();
    rec.vertices = std::move(vertices);
    return rec;
}

}  // namespace

double lfpp_length(const std::vector<std::int32_t>& path, const FieldView& f, double xi) {
    if (path.empty()) throw std::invalid_argument("lfpp_length: empty path");
    for (std::int32_t v : path)
        if (v < 0 || static_cast<std::size_t>(v) >= f.size())
            throw std::out_of_range("lfpp_length: path vertex outside grid");
    return kahan_sum_weights(path, f, xi);
}

CrossingResult crossing_distance(const FieldView& f, double xi) {
    std::vector<double> w = vertex_weights(f, xi);
    std::vector<std::int32_t> sources, targets;
    sources.reserve(f.rows);
    targets.reserve(f.rows);
    for (int r = 0; r < f.rows; ++r) {
        sources.push_back(r * f.cols);
        targets.push_back(r * f.cols + f.cols - 1);
    }
    SearchOutput s = shortest_path(f, w, sources, targets);
    CrossingResult res;
    res.xi = xi;
    res.distance = s.distance;
    res.vertex_count = static_cast<std::int64_t>(s.path.size());
    res.geodesic = make_record(std::move(s.path), f);
    return res;
}

PointResult point_distance(const FieldView& f, double xi, int r0, int c0, int r1, int c1) {
    if (r0 < 0 || r0 >= f.rows || c0 < 0 || c0 >= f.cols || r1 < 0 || r1 >= f.rows || c1 < 0 ||
        c1 >= f.cols)
        throw std::out_of_range("point_distance: endpoint outside grid");
    std::vector<double> w = vertex_weights(f, xi);
    std::int32_t z = r0 * f.cols + c0;
    std::int32_t target = r1 * f.cols + c1;
    SearchOutput s = shortest_path(f, w, {z}, {target});
    PointResult res;
    res.distance = s.distance;
    res.path = make_record(std::move(s.path), f);
    return res;
}

CensusResult census(const FieldView& f, double alpha) {
    if (!(alpha > 0)) throw std::domain_error("census: alpha must be positive");
    double threshold = alpha * std::log(f.eps);
    CensusResult res;
    res.alpha = alpha;
    res.epsilon = f.eps;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f.values[i] < threshold) ++res.count;
    return res;
}

PathSplit path_split(const std::vector<std::int32_t>& path, const FieldView& f, double xi_tilde,
                     double alpha) {
    if (path.empty()) throw std::invalid_argument("path_split: empty path");
    if (!(alpha > 0)) throw std::domain_error("path_split: alpha must be positive");
    double log_eps = std::log(f.eps);
    double threshold = alpha * log_eps;
    PathSplit split;
    double s = 0, comp = 0;
    for (std::int32_t v : path) {
        double h = f.values[v];
        if (h < threshold) {
            ++split.low_count;
        } else {
            double x = f.eps * std::exp(xi_tilde * h);
            double y = x - comp;
            double t = s + y;
            comp = (t - s) - y;
            s = t;
        }
    }
    split.high_term = s;
    split.low_term = std::pow(f.eps, 1.0 + alpha * xi_tilde) * static_cast<double>(split.low_count);
    return split;
}

std::vector<double> multi_xi_evaluate(const PathRecord& geodesic, const FieldView& f,
                                      const std::vector<double>& xi_list) {
    std::vector<double> lengths;
    lengths.reserve(xi_list.size());
    for (double xt : xi_list) lengths.push_back(lfpp_length(geodesic.vertices, f, xt));
    return lengths;
}

}  // namespace lfpp::engine
