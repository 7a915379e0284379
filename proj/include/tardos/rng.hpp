#pragma once
// Reproducible random streams. std:: distributions are implementation-defined
// across standard libraries, so everything stochastic is built on a fixed
// xoshiro256++ generator with hand-rolled samplers; identical seeds give
// bit-identical output on every platform.

#include <cmath>
#include <cstdint>
#include <vector>

namespace tardos {

// SplitMix64 scrambler; used for seeding and for deriving substream seeds.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

// xoshiro256++ by Blackman and Vigna.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_)
            w = sm.next();
        have_normal_ = false;
    }

    // Derives an independent stream for a numbered subtask (trial, worker).
    // The golden-ratio multiply separates consecutive indices across the
    // whole seed space before the SplitMix64 scrambling.
    static Rng substream(std::uint64_t seed, std::uint64_t index) {
        SplitMix64 sm(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
        return Rng(sm.next());
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1), strictly interior; safe as a log() argument.
    double uniform_pos() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; caches the second deviate.
    double normal() {
        if (have_normal_) {
            have_normal_ = false;
            return cached_normal_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform_pos();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925287 * u2;
        cached_normal_ = r * std::sin(a);
        have_normal_ = true;
        return r * std::cos(a);
    }

    // Gamma(shape, 1) via Marsaglia-Tsang; boosted for shape < 1.
    double gamma(double shape) {
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            return g * std::pow(uniform_pos(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double cc = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + cc * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_pos();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2)
                return d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
                return d * v;
        }
    }

    // Symmetric Dirichlet(kappa) over q components via normalized Gammas.
    // Components are strictly inside (0,1): zero draws (possible only through
    // underflow at tiny kappa) are rejected and resampled.
    void dirichlet(double kappa, int q, std::vector<double>& out) {
        out.resize(static_cast<std::size_t>(q));
        for (;;) {
            double sum = 0.0;
            bool ok = true;
            for (int a = 0; a < q; ++a) {
                const double g = gamma(kappa);
                if (g <= 0.0) {
                    ok = false;
                    break;
                }
                out[static_cast<std::size_t>(a)] = g;
                sum += g;
            }
            if (!ok)
                continue;
            bool interior = true;
            for (int a = 0; a < q; ++a) {
                const double p = out[static_cast<std::size_t>(a)] / sum;
                if (!(p > 0.0 && p < 1.0)) {
                    interior = false;
                    break;
                }
                out[static_cast<std::size_t>(a)] = p;
            }
            if (interior)
                return;
        }
    }

    // Draw from a probability vector by cumulative walk.
    int categorical(const double* p, int n) {
        const double u = uniform();
        double acc = 0.0;
        for (int a = 0; a < n; ++a) {
            acc += p[a];
            if (u < acc)
                return a;
        }
        return n - 1;
    }
    int categorical(const std::vector<double>& p) {
        return categorical(p.data(), static_cast<int>(p.size()));
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
    bool have_normal_;
    double cached_normal_;
};

// Compensated (Kahan) accumulator for long score sums.
// Neumaier's variant: the carry survives even when a single addend dwarfs the
// running sum, which plain Kahan loses.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            carry += (sum - t) + x;
        else
            carry += (x - t) + sum;
        sum = t;
    }

    double value() const { return sum + carry; }
};

} // namespace tardos
