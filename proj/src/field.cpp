#include "lfpp/field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "lfpp/rng.hpp"

namespace lfpp::field {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kLog2 = std::numbers::ln2;

// FFTW plan creation is not thread safe; execution on distinct buffers is.
// Plans are cached per transform size, created with FFTW_UNALIGNED so the
// new-array execute functions accept ordinary vector storage.
std::mutex g_plan_mutex;

fftw_plan dst2d_plan(int m) {
    static std::map<int, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    std::vector<double> scratch_in(static_cast<std::size_t>(m) * m);
    std::vector<double> scratch_out(static_cast<std::size_t>(m) * m);
    fftw_plan plan = fftw_plan_r2r_2d(m, m, scratch_in.data(), scratch_out.data(),
                                      FFTW_RODFT00, FFTW_RODFT00,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw std::runtime_error("fftw: failed to plan RODFT00");
    cache.emplace(m, plan);
    return plan;
}

fftw_plan idft2d_plan(int n) {
    static std::map<int, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<std::complex<double>> scratch_in(static_cast<std::size_t>(n) * n);
    std::vector<std::complex<double>> scratch_out(static_cast<std::size_t>(n) * n);
    fftw_plan plan = fftw_plan_dft_2d(n, n,
                                      reinterpret_cast<fftw_complex*>(scratch_in.data()),
                                      reinterpret_cast<fftw_complex*>(scratch_out.data()),
                                      FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw std::runtime_error("fftw: failed to plan c2c");
    cache.emplace(n, plan);
    return plan;
}

void subtract_mean(std::vector<double>& v) {
    double s = 0, comp = 0;
    for (double x : v) {
        double y = x - comp;
        double t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    double mean = s / static_cast<double>(v.size());
    for (double& x : v) x -= mean;
}

int exact_pad_cells(const GridSpec& spec) {
    // the zero-boundary construction needs at least one full unit of padding
    int pad_units = std::max(1, static_cast<int>(std::ceil(spec.padding_factor)));
    return pad_units << spec.k;
}

int fourier_pad_cells(const GridSpec& spec) {
    int cells = spec.n_per_side - 1;
    int pad = static_cast<int>(std::llround(spec.padding_factor * cells));
    if (pad < 1)
        throw std::domain_error(
            "sample_fourier: padding_factor too small; the torus would identify opposite edges");
    return pad;
}

struct FourierGeometry {
    int n_torus;       // lattice points per torus side
    double side;       // physical torus side
    double band_amp2;  // per-mode power numerator: band carries band_amp2 / kappa^2
    double white_amp2; // extra per-mode power on the top-octave shell
};

// Two-part spectrum. The 1/kappa^2 band carries exactly one unit of variance
// per log-octave of wavenumber, which is what makes covariance fall off like
// -log distance; the remainder of the calibrated total variance sits in a
// white component on the top octave, where it is invisible at mesoscopic lags.
// Splitting the calibration constant off the band keeps the covariance slope
// at -1; folding it into a uniform rescale would tilt the slope by c0/log(1/eps).
FourierGeometry fourier_geometry(const GridSpec& spec) {
    static std::map<std::tuple<int, int, long long>, FourierGeometry> cache;
    int cells = spec.n_per_side - 1;
    int pad = fourier_pad_cells(spec);
    int n = cells + 2 * pad;
    long long pf_key = static_cast<long long>(std::llround(spec.padding_factor * 1024.0));
    {
        std::lock_guard<std::mutex> lock(g_plan_mutex);
        auto it = cache.find({spec.k, n, pf_key});
        if (it != cache.end()) return it->second;
    }
    FourierGeometry geo;
    geo.n_torus = n;
    geo.side = n * spec.epsilon;
    geo.band_amp2 = 1.0 / (kTwoPi * geo.side * geo.side);
    double cutoff = 1.0 / spec.epsilon;
    double band_var = 0;
    long shell_modes = 0;
    for (int a = 0; a < n; ++a) {
        double f1 = a <= n / 2 ? a : a - n;
        for (int b = 0; b < n; ++b) {
            double f2 = b <= n / 2 ? b : b - n;
            double mag = std::sqrt(f1 * f1 + f2 * f2);
            if (mag == 0.0) continue;
            double kappa = mag / geo.side;
            if (kappa < 1.0 - 1e-9 || kappa > cutoff + 1e-9) continue;
            band_var += geo.band_amp2 / (kappa * kappa);
            if (kappa > 0.5 * cutoff) ++shell_modes;
        }
    }
    double target = spec.k * kLog2 + fourier_calibration_c0(spec.padding_factor);
    geo.white_amp2 =
        shell_modes > 0 ? std::max(target - band_var, 0.0) / static_cast<double>(shell_modes)
                        : 0.0;
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    cache.emplace(std::make_tuple(spec.k, n, pf_key), geo);
    return geo;
}

}  // namespace

const char* sampler_name(SamplerKind kind) {
    switch (kind) {
        case SamplerKind::exact_dgff: return "exact_dgff";
        case SamplerKind::fourier: return "fourier";
        case SamplerKind::layered: return "layered";
    }
    return "unknown";
}

SamplerKind sampler_from_name(const std::string& name) {
    if (name == "exact" || name == "exact_dgff") return SamplerKind::exact_dgff;
    if (name == "fourier") return SamplerKind::fourier;
    if (name == "layered") return SamplerKind::layered;
    throw std::invalid_argument("unknown sampler: " + name);
}

FieldSample sample_exact_dgff(const GridSpec& spec, std::uint64_t seed) {
    if (spec.n_per_side > 513)
        throw std::length_error("sample_exact_dgff: grid too large for exact factorization");
    int pad = exact_pad_cells(spec);
    int n = spec.n_per_side;
    int m = (n - 1) + 2 * pad - 1;  // interior vertices per padded side

    std::vector<double> mu(m);
    for (int p = 1; p <= m; ++p) mu[p - 1] = 2.0 - 2.0 * std::cos(kPi * p / (m + 1));

    std::vector<double> coef(static_cast<std::size_t>(m) * m);
    rng::Stream gen(seed);
    for (int p = 0; p < m; ++p) {
        double* row = coef.data() + static_cast<std::size_t>(p) * m;
        for (int q = 0; q < m; ++q)
            row[q] = gen.next_normal() * std::sqrt(kTwoPi / (mu[p] + mu[q]));
    }

    std::vector<double> padded(static_cast<std::size_t>(m) * m);
    fftw_execute_r2r(dst2d_plan(m), coef.data(), padded.data());

    double scale = 1.0 / (2.0 * (m + 1));
    FieldSample out;
    out.spec = spec;
    out.kind = SamplerKind::exact_dgff;
    out.seed = seed;
    out.values.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        const double* src = padded.data() + static_cast<std::size_t>(pad + i - 1) * m + (pad - 1);
        double* dst = out.values.data() + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) dst[j] = src[j] * scale;
    }
    subtract_mean(out.values);
    return out;
}

double exact_vertex_variance(const GridSpec& spec, int i, int j) {
    if (i < 0 || j < 0 || i >= spec.n_per_side || j >= spec.n_per_side)
        throw std::out_of_range("exact_vertex_variance: vertex outside grid");
    int pad = exact_pad_cells(spec);
    int m = (spec.n_per_side - 1) + 2 * pad - 1;
    int gi = pad + i, gj = pad + j;
    std::vector<double> mu(m), a(m), b(m);
    for (int p = 1; p <= m; ++p) {
        mu[p - 1] = 2.0 - 2.0 * std::cos(kPi * p / (m + 1));
        double sa = std::sin(kPi * p * gi / (m + 1));
        double sb = std::sin(kPi * p * gj / (m + 1));
        a[p - 1] = 2.0 / (m + 1) * sa * sa;
        b[p - 1] = 2.0 / (m + 1) * sb * sb;
    }
    double var = 0;
    for (int p = 0; p < m; ++p) {
        double inner = 0;
        for (int q = 0; q < m; ++q) inner += b[q] / (mu[p] + mu[q]);
        var += a[p] * inner;
    }
    return kTwoPi * var;
}

double exact_center_variance(const GridSpec& spec) {
    int c = (spec.n_per_side - 1) / 2;
    return exact_vertex_variance(spec, c, c);
}

// Var(h(c) - mean(h)) = 2*pi * sum_{p,q} (c_p c_q - s_p s_q)^2 / (mu_p + mu_q)
// with c_* the center components and s_* the window averages of the 1D
// Dirichlet eigenvectors.
double exact_center_variance_normalized(const GridSpec& spec) {
    int pad = exact_pad_cells(spec);
    int n = spec.n_per_side;
    int m = (n - 1) + 2 * pad - 1;
    int gc = pad + (n - 1) / 2;
    std::vector<double> mu(m), cv(m), sv(m);
    double norm = std::sqrt(2.0 / (m + 1));
    for (int p = 1; p <= m; ++p) {
        mu[p - 1] = 2.0 - 2.0 * std::cos(kPi * p / (m + 1));
        cv[p - 1] = norm * std::sin(kPi * p * gc / (m + 1));
        double s = 0;
        for (int i = 0; i < n; ++i) s += std::sin(kPi * p * (pad + i) / (m + 1));
        sv[p - 1] = norm * s / n;
    }
    double var = 0;
    for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q) {
            double d = cv[p] * cv[q] - sv[p] * sv[q];
            var += d * d / (mu[p] + mu[q]);
        }
    return kTwoPi * var;
}

double fourier_calibration_c0(double padding_factor) {
    static std::map<long long, double> cache;
    long long key = static_cast<long long>(std::llround(padding_factor * 1024.0));
    {
        std::lock_guard<std::mutex> lock(g_plan_mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    double c0 = exact_center_variance_normalized(make_grid(5, padding_factor)) - 5.0 * kLog2;
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    cache.emplace(key, c0);
    return c0;
}

FieldSample sample_fourier(const GridSpec& spec, std::uint64_t seed) {
    FourierGeometry geo = fourier_geometry(spec);
    int n = geo.n_torus;
    int pad = fourier_pad_cells(spec);
    double cutoff = 1.0 / spec.epsilon;

    std::vector<std::complex<double>> spectrum(static_cast<std::size_t>(n) * n, {0.0, 0.0});
    rng::Stream gen(seed);
    for (int a = 0; a < n; ++a) {
        double f1 = a <= n / 2 ? a : a - n;
        for (int b = 0; b < n; ++b) {
            double f2 = b <= n / 2 ? b : b - n;
            double u = gen.next_normal();
            double v = gen.next_normal();
            double mag = std::sqrt(f1 * f1 + f2 * f2);
            if (mag == 0.0) continue;
            double kappa = mag / geo.side;
            if (kappa < 1.0 - 1e-9 || kappa > cutoff + 1e-9) continue;
            double amp2 = geo.band_amp2 / (kappa * kappa);
            if (kappa > 0.5 * cutoff) amp2 += geo.white_amp2;
            double amp = std::sqrt(amp2);
            spectrum[static_cast<std::size_t>(a) * n + b] = {amp * u, amp * v};
        }
    }

    std::vector<std::complex<double>> synth(static_cast<std::size_t>(n) * n);
    fftw_execute_dft(idft2d_plan(n),
                     reinterpret_cast<fftw_complex*>(spectrum.data()),
                     reinterpret_cast<fftw_complex*>(synth.data()));

    int ns = spec.n_per_side;
    FieldSample out;
    out.spec = spec;
    out.kind = SamplerKind::fourier;
    out.seed = seed;
    out.values.resize(static_cast<std::size_t>(ns) * ns);
    for (int i = 0; i < ns; ++i) {
        const std::complex<double>* src = synth.data() + static_cast<std::size_t>(pad + i) * n + pad;
        double* dst = out.values.data() + static_cast<std::size_t>(i) * ns;
        for (int j = 0; j < ns; ++j) dst[j] = src[j].real();
    }
    subtract_mean(out.values);
    return out;
}

std::vector<double> layered_layer(const GridSpec& spec, std::uint64_t seed, int layer) {
    if (layer < 0 || layer > spec.k) throw std::out_of_range("layered_layer: layer outside 0..k");
    int n = spec.n_per_side;
    int lj = 1 << layer;  // coarse cells per side
    int nodes = lj + 1;
    rng::Stream gen(rng::combine({seed, static_cast<std::uint64_t>(layer), 0x1a7e7ULL}));
    std::vector<double> g(static_cast<std::size_t>(nodes) * nodes);
    for (double& x : g) x = gen.next_normal();

    // Each vertex value is the bilinear blend of the four surrounding lattice
    // draws, renormalized by the blend's own standard deviation so the layer
    // variance is log 2 at every vertex, not only at lattice nodes. Without
    // the renormalization mid-cell variance shrinks by the squared-weight sum
    // and the covariance-vs-log-distance slope flattens well below 1.
    double sigma = std::sqrt(kLog2);

    std::vector<double> out(static_cast<std::size_t>(n) * n);
    int den = 1 << spec.k;
    for (int i = 0; i < n; ++i) {
        long long num_i = static_cast<long long>(i) * lj;
        int ai = static_cast<int>(num_i >> spec.k);
        double fi = static_cast<double>(num_i & (den - 1)) / den;
        int ai1 = std::min(ai + 1, lj);
        double wi = (1 - fi) * (1 - fi) + fi * fi;
        for (int j = 0; j < n; ++j) {
            long long num_j = static_cast<long long>(j) * lj;
            int aj = static_cast<int>(num_j >> spec.k);
            double fj = static_cast<double>(num_j & (den - 1)) / den;
            int aj1 = std::min(aj + 1, lj);
            double v00 = g[static_cast<std::size_t>(ai) * nodes + aj];
            double v10 = g[static_cast<std::size_t>(ai1) * nodes + aj];
            double v01 = g[static_cast<std::size_t>(ai) * nodes + aj1];
            double v11 = g[static_cast<std::size_t>(ai1) * nodes + aj1];
            double wj = (1 - fj) * (1 - fj) + fj * fj;
            out[static_cast<std::size_t>(i) * n + j] =
                sigma / std::sqrt(wi * wj) *
                ((1 - fi) * (1 - fj) * v00 + fi * (1 - fj) * v10 + (1 - fi) * fj * v01 +
                 fi * fj * v11);
        }
    }
    return out;
}

FieldSample sample_layered(const GridSpec& spec, std::uint64_t seed) {
    int n = spec.n_per_side;
    FieldSample out;
    out.spec = spec;
    out.kind = SamplerKind::layered;
    out.seed = seed;
    out.values.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j <= spec.k; ++j) {
        std::vector<double> layer = layered_layer(spec, seed, j);
        for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += layer[i];
    }
    subtract_mean(out.values);
    return out;
}

FieldSample sample(SamplerKind kind, const GridSpec& spec, std::uint64_t seed) {
    switch (kind) {
        case SamplerKind::exact_dgff: return sample_exact_dgff(spec, seed);
        case SamplerKind::fourier: return sample_fourier(spec, seed);
        case SamplerKind::layered: return sample_layered(spec, seed);
    }
    throw std::invalid_argument("sample: unknown sampler kind");
}

FieldStats validate_field(const std::vector<FieldSample>& samples, double uniformity_budget) {
    if (samples.empty()) throw std::invalid_argument("validate_field: no samples");
    const GridSpec& spec = samples.front().spec;
    SamplerKind kind = samples.front().kind;
    for (const auto& s : samples) {
        if (s.spec.k != spec.k || s.spec.n_per_side != spec.n_per_side || s.kind != kind)
            throw std::invalid_argument("validate_field: mixed specs or sampler kinds");
    }

    FieldStats stats;
    int n = spec.n_per_side;
    std::size_t reps = samples.size();
    stats.replicate_count = static_cast<int>(reps);
    if (reps < 2) {
        stats.degenerate = true;
        return stats;
    }

    // variance over a deterministic interior subsample
    std::vector<std::size_t> subsample;
    if (n > 2) {
        int stride = std::max(1, (n - 2) / 24);
        for (int i = 1; i < n - 1; i += stride)
            for (int j = 1; j < n - 1; j += stride)
                subsample.push_back(static_cast<std::size_t>(i) * n + j);
    } else {
        for (int i = 0; i < n * n; ++i) subsample.push_back(i);
    }

    std::vector<double> vars;
    vars.reserve(subsample.size());
    for (std::size_t idx : subsample) {
        double mean = 0;
        for (const auto& s : samples) mean += s.values[idx];
        mean /= static_cast<double>(reps);
        double acc = 0;
        for (const auto& s : samples) {
            double d = s.values[idx] - mean;
            acc += d * d;
        }
        vars.push_back(acc / static_cast<double>(reps - 1));
    }
    std::vector<double> sorted = vars;
    std::sort(sorted.begin(), sorted.end());
    stats.var_min = sorted.front();
    stats.var_max = sorted.back();
    stats.var_median = sorted[sorted.size() / 2];
    stats.uniformity_spread = stats.var_max - stats.var_min;
    stats.uniformity_ok = stats.uniformity_spread <= uniformity_budget;

    {
        std::size_t c = static_cast<std::size_t>(n / 2) * n + n / 2;
        double mean = 0;
        for (const auto& s : samples) mean += s.values[c];
        mean /= static_cast<double>(reps);
        double acc = 0;
        for (const auto& s : samples) {
            double d = s.values[c] - mean;
            acc += d * d;
        }
        stats.center_variance = acc / static_cast<double>(reps - 1);
    }

    // covariance at dyadic lags within [4 eps, 1/8]
    int max_lag = (n - 1) / 8;
    for (int lag = 4; lag <= max_lag; lag *= 2) {
        int stride = std::max(1, (n - 1) / 16);
        double acc = 0;
        long pairs = 0;
        for (int i = 0; i < n; i += stride) {
            for (int j = 0; j + lag < n; j += stride) {
                std::size_t z = static_cast<std::size_t>(i) * n + j;
                std::size_t w = z + lag;
                double mz = 0, mw = 0;
                for (const auto& s : samples) {
                    mz += s.values[z];
                    mw += s.values[w];
                }
                mz /= static_cast<double>(reps);
                mw /= static_cast<double>(reps);
                double c = 0;
                for (const auto& s : samples)
                    c += (s.values[z] - mz) * (s.values[w] - mw);
                acc += c / static_cast<double>(reps - 1);
                ++pairs;
            }
        }
        if (pairs > 0)
            stats.cov_points.emplace_back(std::log(lag * spec.epsilon), acc / pairs);
    }
    if (stats.cov_points.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        double nn = static_cast<double>(stats.cov_points.size());
        for (auto [x, y] : stats.cov_points) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        double det = nn * sxx - sx * sx;
        stats.cov_slope = (nn * sxy - sx * sy) / det;
        stats.cov_intercept = (sy - stats.cov_slope * sx) / nn;
        stats.cov_fit_valid = true;
    }
    return stats;
}

}  // namespace lfpp::field
