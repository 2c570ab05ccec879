#ifndef ANC_PRNG_HPP
#define ANC_PRNG_HPP

#include <array>
#include <cmath>
#include <cstdint>

namespace anc {

// Philox4x32-10 counter-based generator. Every output block is a pure
// function of (seed, stream, counter), so simulation batches can be split
// across threads and still reproduce bit-for-bit in any schedule.
class Philox {
  public:
    explicit Philox(std::uint64_t seed) : key_{static_cast<std::uint32_t>(seed),
                                               static_cast<std::uint32_t>(seed >> 32)} {}

    std::array<std::uint32_t, 4> block(std::uint64_t counter, std::uint64_t stream = 0) const {
        std::uint32_t c0 = static_cast<std::uint32_t>(counter);
        std::uint32_t c1 = static_cast<std::uint32_t>(counter >> 32);
        std::uint32_t c2 = static_cast<std::uint32_t>(stream);
        std::uint32_t c3 = static_cast<std::uint32_t>(stream >> 32);
        std::uint32_t k0 = key_[0];
        std::uint32_t k1 = key_[1];
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = kMul0 * static_cast<std::uint64_t>(c0);
            const std::uint64_t p1 = kMul1 * static_cast<std::uint64_t>(c2);
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            const std::uint32_t n0 = hi1 ^ c1 ^ k0;
            const std::uint32_t n2 = hi0 ^ c3 ^ k1;
            c0 = n0;
            c1 = lo1;
            c2 = n2;
            c3 = lo0;
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        return {c0, c1, c2, c3};
    }

    // Two uniforms in (0, 1] from one block.
    std::array<double, 2> uniforms(std::uint64_t counter, std::uint64_t stream = 0) const {
        const auto b = block(counter, stream);
        const std::uint64_t u0 = (static_cast<std::uint64_t>(b[1]) << 32) | b[0];
        const std::uint64_t u1 = (static_cast<std::uint64_t>(b[3]) << 32) | b[2];
        return {to_unit(u0), to_unit(u1)};
    }

    // Two independent standard normals via Box-Muller from one block.
    std::array<double, 2> normals(std::uint64_t counter, std::uint64_t stream = 0) const {
        const auto u = uniforms(counter, stream);
        const double r = std::sqrt(-2.0 * std::log(u[0]));
        const double t = 2.0 * kPi * u[1];
        return {r * std::cos(t), r * std::sin(t)};
    }

  private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    static constexpr double kPi = 3.14159265358979323846;

    static double to_unit(std::uint64_t x) {
        // (0,1]: never returns 0, so log() above is safe.
        return (static_cast<double>(x >> 11) + 1.0) * 0x1p-53;
    }

    std::array<std::uint32_t, 2> key_;
};

// Sequential convenience wrapper for test generators and CLI seeding.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0)
        : gen_(seed), stream_(stream) {}

    double uniform() {
        if (pending_) {
            pending_ = false;
            return spare_;
        }
        const auto u = gen_.uniforms(counter_++, stream_);
        spare_ = u[1];
        pending_ = true;
        return u[0];
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // log-uniform over [lo, hi], lo > 0
    double log_uniform(double lo, double hi) {
        return lo * std::exp(uniform() * std::log(hi / lo));
    }

    double normal() {
        if (normal_pending_) {
            normal_pending_ = false;
            return normal_spare_;
        }
        const auto z = gen_.normals(counter_++, stream_ + 0x9E3779B97F4A7C15ull);
        normal_spare_ = z[1];
        normal_pending_ = true;
        return z[0];
    }

    std::uint64_t integer(std::uint64_t n) {  // uniform in [0, n)
        const auto u = gen_.uniforms(counter_++, stream_ + 0xD1B54A32D192ED03ull);
        return static_cast<std::uint64_t>(u[0] * static_cast<double>(n)) % n;
    }

  private:
    Philox gen_;
    std::uint64_t stream_ = 0;
    std::uint64_t counter_ = 0;
    bool pending_ = false;
    double spare_ = 0.0;
    bool normal_pending_ = false;
    double normal_spare_ = 0.0;
};

}  // namespace anc

#endif
