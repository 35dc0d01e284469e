#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

// Counter-based seeding and a reproducible normal generator. Replicate r of an
// experiment derives its stream seed as combine({master, tags...}); streams are
// therefore independent of scheduling and worker count. Box-Muller is used
// instead of std::normal_distribution, whose output is not specified by the
// standard and differs between library implementations.

namespace lfpp::rng {

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t combine(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t acc = 0x243f6a8885a308d3ULL;
    for (std::uint64_t p : parts) acc = mix64(acc ^ mix64(p));
    return acc;
}

class Stream {
  public:
    explicit Stream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    // uniform on (0,1), 53-bit resolution, never exactly 0 or 1
    double next_u01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = next_u01();
        double v = next_u01();
        double r = std::sqrt(-2.0 * std::log(u));
        double t = 6.283185307179586476925286766559 * v;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

  private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace lfpp::rng
