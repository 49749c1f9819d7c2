#pragma once

#include <cstdint>
#include <random>

namespace mcread {

/// splitmix64; used to derive independent per-shot streams from one seed so
/// results do not depend on batching order.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Gaussian deviates via Box-Muller over mt19937_64. std::normal_distribution
/// is implementation-defined, which would break byte-identical reproducibility
/// across standard libraries.
class GaussianSampler {
public:
    explicit GaussianSampler(uint64_t seed) : eng_(seed) {}

    double uniform() {  // in (0, 1]
        return double((eng_() >> 11) + 1) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0;
};

}  // namespace mcread
