#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace pasf {

// Seeded generator with fully specified output. std::mt19937_64 is pinned by
// the standard, but the <random> distributions are not, so the double-valued
// draws are derived here explicitly to keep results identical across
// platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t bits() { return eng_(); }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    // uniform in [-1, 1]
    double uniform_pm1() { return 2.0 * uniform() - 1.0; }

    // standard normal via Box-Muller (deterministic; two uniforms per pair)
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    // integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        // rejection-free modulo bias is irrelevant at our scales, but keep it
        // exact anyway so that reports are reproducible bit for bit
        const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
        std::uint64_t x = eng_();
        while (x >= limit) x = eng_();
        return x % n;
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace pasf
