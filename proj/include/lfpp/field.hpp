#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lfpp/grid.hpp"

// Approximate circle-average fields h_eps on the grid. Three samplers:
//   exact_dgff: zero-boundary discrete GFF on the padded box, drawn by exact
//               spectral factorization of the 5-point Dirichlet Laplacian,
//               covariance 2*pi*Laplacian^{-1}, restricted to the square;
//   fourier:    stationary synthesis on a padded torus: a 1/|k| spectral band
//               between wavenumber 1 and the lattice cutoff carrying one unit
//               of variance per log-octave (covariance ~ -log distance), plus
//               a white top-octave component that tops the marginal variance
//               up to k*log(2) + c0;
//   layered:    sum over dyadic scales of bilinearly interpolated iid
//               Gaussian lattices, log(2) of center variance per layer.
// All samplers subtract the domain mean and are bit-deterministic in
// (spec, seed) regardless of thread count.

namespace lfpp::field {

enum class SamplerKind : std::uint8_t { exact_dgff = 0, fourier = 1, layered = 2 };

const char* sampler_name(SamplerKind kind);
SamplerKind sampler_from_name(const std::string& name);  // accepts "exact" too

struct FieldSample {
    GridSpec spec;
    SamplerKind kind = SamplerKind::exact_dgff;
    std::uint64_t seed = 0;
    std::vector<double> values;  // row-major n_per_side x n_per_side
};

FieldSample sample_exact_dgff(const GridSpec& spec, std::uint64_t seed);
FieldSample sample_fourier(const GridSpec& spec, std::uint64_t seed);
FieldSample sample_layered(const GridSpec& spec, std::uint64_t seed);
FieldSample sample(SamplerKind kind, const GridSpec& spec, std::uint64_t seed);

// Pre-normalization marginal variance of the exact sampler at grid vertex
// (i, j), from the Dirichlet eigenbasis of the padded box. O(m^2) terms.
double exact_vertex_variance(const GridSpec& spec, int i, int j);
double exact_center_variance(const GridSpec& spec);

// Center variance of the field the exact sampler emits, i.e. after domain-mean
// subtraction. The subtraction removes the padded box's large-scale modes, so
// this sits well below the raw diagonal; it is the right anchor for
// cross-sampler calibration.
double exact_center_variance_normalized(const GridSpec& spec);

// c0 such that the fourier sampler's emitted variance is k*log(2) + c0: the
// exact sampler's emitted center variance at k = 5 minus 5*log(2), for the
// given padding. Closed form; a Monte-Carlo fit of the same anchor is kept as
// a cross-check in the tests.
double fourier_calibration_c0(double padding_factor);

// One layer of the layered sampler (before normalization); exposed for the
// layer-independence checks.
std::vector<double> layered_layer(const GridSpec& spec, std::uint64_t seed, int layer);

struct FieldStats {
    int replicate_count = 0;
    bool degenerate = false;  // fewer than 2 replicates: variances undefined
    double var_min = 0, var_median = 0, var_max = 0;
    double center_variance = 0;
    double uniformity_spread = 0;  // var_max - var_min over the vertex subsample
    bool uniformity_ok = true;
    // covariance against log distance at dyadic lags in [4*eps, 1/8]
    std::vector<std::pair<double, double>> cov_points;  // (log lag, covariance)
    double cov_slope = 0, cov_intercept = 0;
    bool cov_fit_valid = false;
};

// Replicate statistics; all samples must share spec and sampler kind.
FieldStats validate_field(const std::vector<FieldSample>& samples, double uniformity_budget = 2.0);

}  // namespace lfpp::field
