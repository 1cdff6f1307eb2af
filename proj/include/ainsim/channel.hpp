#pragma once

// Seeded generation of channel realizations and noise for the 5-node network
// (two sources, two destinations, one instantaneous relay), in both the
// complex MIMO and the real scalar variants.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

#include <Eigen/Dense>

#include "ainsim/errors.hpp"

namespace ainsim {

using cplx = std::complex<double>;

/// Identifies one reproducible random stream. Identical (seed, stream_id)
/// always reproduce identical draws bit-exactly.
struct RunSeed {
    std::uint64_t seed = 0;
    std::int64_t stream_id = 0;

    /// Derives a disjoint child stream; used to partition channel draws,
    /// noise draws, per-trial and per-grid-point work.
    [[nodiscard]] RunSeed derived(std::int64_t tag) const noexcept;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace detail

inline RunSeed RunSeed::derived(std::int64_t tag) const noexcept {
    const auto child = detail::mix64(static_cast<std::uint64_t>(stream_id) ^
                                     detail::mix64(static_cast<std::uint64_t>(tag)));
    return RunSeed{seed, static_cast<std::int64_t>(child)};
}

// Stream tags used across the library. Trial loops derive further substreams
// from these, so parallel trials never share a stream.
inline constexpr std::int64_t kStreamChannel = 1;
inline constexpr std::int64_t kStreamNoise = 2;
inline constexpr std::int64_t kStreamBeams = 3;
inline constexpr std::int64_t kStreamSymbols = 4;

/// Deterministic generator. Gaussian variates come from an explicit
/// Box-Muller transform over raw 64-bit output, so sequences are bit-exact
/// for a given RunSeed independent of the standard library's distribution
/// implementations.
class Rng {
   public:
    explicit Rng(RunSeed s) noexcept {
        std::uint64_t x = detail::mix64(s.seed) ^
                          detail::mix64(detail::mix64(static_cast<std::uint64_t>(s.stream_id)));
        // splitmix64 expansion into the xoshiro256++ state
        for (auto& w : state_) w = detail::mix64(x += 0x9E3779B97F4A7C15ULL);
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on [0, 1).
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard real Gaussian N(0, 1).
    double normal() noexcept {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Circularly-symmetric complex Gaussian CN(0, 1): real and imaginary
    /// parts are each N(0, 1/2) so the total variance is 1.
    cplx cnormal() noexcept {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

   private:
    static std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4] = {};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// The eight complex M-by-M matrices of the 5-node network. h_jk maps sender
/// k to receiver j ("r" is the relay); all entries are i.i.d. CN(0, 1).
struct MimoChannel {
    int m = 0;
    Eigen::MatrixXcd h_r1, h_r2;              // sources -> relay
    Eigen::MatrixXcd h_11, h_12, h_21, h_22;  // sources -> destinations
    Eigen::MatrixXcd h_1r, h_2r;              // relay -> destinations
};

/// Real scalar variant: all gains real, time invariant, nonzero.
struct ScalarChannel {
    double h_r1 = 0, h_r2 = 0;
    double h_11 = 0, h_12 = 0, h_21 = 0, h_22 = 0;
    double h_1r = 0, h_2r = 0;
};

/// 2-norm condition number; sampled matrices above kSingularCondition are
/// treated as numerically singular and rejected.
inline constexpr double kSingularCondition = 1e12;

inline double condition_number(const Eigen::MatrixXcd& a) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    const double smin = svd.singularValues().minCoeff();
    if (smin <= 0.0) return std::numeric_limits<double>::infinity();
    return svd.singularValues().maxCoeff() / smin;
}

namespace detail {

inline Eigen::MatrixXcd sample_invertible_matrix(int m, Rng& rng) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        Eigen::MatrixXcd a(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) a(i, j) = rng.cnormal();
        if (condition_number(a) < kSingularCondition) return a;
    }
    throw GenerationError("channel generation failed: 100 consecutive singular draws");
}

}  // namespace detail

/// Draws one MIMO channel realization. Matrices are generated in a fixed
/// order (h_r1, h_r2, h_11, h_12, h_21, h_22, h_1r, h_2r) from the stream
/// (seed, stream_id), so equal seeds give bit-identical channels.
inline MimoChannel sample_mimo_channel(int m, RunSeed seed) {
    if (m < 1) throw ArgumentError("antenna count must be >= 1");
    Rng rng(seed);
    MimoChannel ch;
    ch.m = m;
    ch.h_r1 = detail::sample_invertible_matrix(m, rng);
    ch.h_r2 = detail::sample_invertible_matrix(m, rng);
    ch.h_11 = detail::sample_invertible_matrix(m, rng);
    ch.h_12 = detail::sample_invertible_matrix(m, rng);
    ch.h_21 = detail::sample_invertible_matrix(m, rng);
    ch.h_22 = detail::sample_invertible_matrix(m, rng);
    ch.h_1r = detail::sample_invertible_matrix(m, rng);
    ch.h_2r = detail::sample_invertible_matrix(m, rng);
    return ch;
}

/// Draws one real scalar channel; every coefficient is N(0, 1) and nonzero.
inline ScalarChannel sample_scalar_channel(RunSeed seed) {
    Rng rng(seed);
    auto draw = [&rng] {
        double h = rng.normal();
        while (h == 0.0) h = rng.normal();
        return h;
    };
    ScalarChannel ch;
    ch.h_r1 = draw();
    ch.h_r2 = draw();
    ch.h_11 = draw();
    ch.h_12 = draw();
    ch.h_21 = draw();
    ch.h_22 = draw();
    ch.h_1r = draw();
    ch.h_2r = draw();
    return ch;
}

/// Complex noise vector with per-component variance `variance`
/// (CN(0, variance) entries). Variance 0 returns the zero vector.
inline Eigen::VectorXcd sample_noise(int dim, double variance, RunSeed seed) {
    if (dim < 1) throw ArgumentError("noise dimension must be >= 1");
    if (variance < 0.0) throw ArgumentError("noise variance must be nonnegative");
    Eigen::VectorXcd n = Eigen::VectorXcd::Zero(dim);
    if (variance == 0.0) return n;
    Rng rng(seed);
    const double scale = std::sqrt(variance);
    for (int i = 0; i < dim; ++i) n(i) = scale * rng.cnormal();
    return n;
}

/// Real noise vector with per-component variance `variance`.
inline Eigen::VectorXd sample_noise_real(int dim, double variance, RunSeed seed) {
    if (dim < 1) throw ArgumentError("noise dimension must be >= 1");
    if (variance < 0.0) throw ArgumentError("noise variance must be nonnegative");
    Eigen::VectorXd n = Eigen::VectorXd::Zero(dim);
    if (variance == 0.0) return n;
    Rng rng(seed);
    const double scale = std::sqrt(variance);
    for (int i = 0; i < dim; ++i) n(i) = scale * rng.normal();
    return n;
}

}  // namespace ainsim
