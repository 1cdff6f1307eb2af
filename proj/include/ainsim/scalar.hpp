#pragma once

// Single-antenna scheme over real channels: integer data symbols ride real
// direction coefficients. Parts 2 and 3 of the two sources are steered so
// they add up at the relay; the relay decodes the four resulting integer
// combinations by nearest-point search over the received constellation and
// re-broadcasts them along directions that cancel two interference symbols
// at each destination.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ainsim/channel.hpp"
#include "ainsim/errors.hpp"

namespace ainsim::scalar {

/// Direction coefficients and power normalizers of the scalar scheme.
///
/// v1/v2 are the per-part transmit directions of the two sources, vr the four
/// relay directions. Sources transmit a_const * sum_j v[j] s_j with integer
/// s_j in [-q, q]; the relay transmits b_const * sum_j vr[j] srelay_j. The
/// relay directions satisfy b_const * h * vr = -a_const * h' * v exactly, so
/// the same back-off constant serves both (a_const == b_const; the products
/// b_const*vr are pinned by the cancellation identities either way).
struct ScalarScheme {
    std::array<double, 3> v1{};
    std::array<double, 3> v2{};
    std::array<double, 4> vr{};
    double a_const = 0.0;
    double b_const = 0.0;
    int q = 1;
    double gamma = 1.0;
    double epsilon = 0.5;
    int m_rational = 4;  // rationally independent integers per receiver
};

/// Constellation size exponent: Q grows as gamma * P^((1-eps)/(2(m+eps)))
/// with m = 4, floored at 1.
inline int choose_q(double p, double gamma, double epsilon) {
    if (p <= 0.0) throw ArgumentError("power must be positive");
    if (gamma <= 0.0) throw ArgumentError("gamma must be positive");
    if (epsilon <= 0.0 || epsilon >= 1.0) throw ArgumentError("epsilon must be in (0, 1)");
    const double exponent = (1.0 - epsilon) / (2.0 * (4.0 + epsilon));
    const double q = std::floor(gamma * std::pow(p, exponent));
    return std::max(1, static_cast<int>(q));
}

/// Second moment of a symbol drawn uniformly from the integers in [-q, q].
inline double uniform_symbol_power(int q) { return q * (q + 1) / 3.0; }

namespace detail {

inline void require_nonzero(const ScalarChannel& ch) {
    for (double h : {ch.h_r1, ch.h_r2, ch.h_11, ch.h_12, ch.h_21, ch.h_22, ch.h_1r, ch.h_2r})
        if (h == 0.0) throw DegenerateChannelError("scalar channel has a zero coefficient");
}

/// Free directions are continuous random reals of magnitude near one
/// (sign * uniform[0.5, 1.5]); exact unit magnitudes would make the relay
/// constellation rationally dependent.
inline double random_direction(Rng& rng) {
    const double magnitude = 0.5 + rng.uniform();
    return rng.uniform() < 0.5 ? -magnitude : magnitude;
}

}  // namespace detail

/// Builds the full scheme for transmit power p and constellation bound q.
///
/// Order of construction: free directions (v1 parts 1-2, v2 parts 1 and 3),
/// aligned directions (v2 part 2, v1 part 3), then the relay directions from
/// the cancellation identities, then one joint normalizer sized so that all
/// three transmitters meet the power constraint with exact symbol moments.
inline ScalarScheme build_scalar_scheme(const ScalarChannel& ch, double p, int q, RunSeed seed) {
    detail::require_nonzero(ch);
    if (q < 1) throw ArgumentError("constellation bound q must be >= 1");
    if (p <= 0.0) throw ArgumentError("power must be positive");

    Rng rng(seed.derived(kStreamBeams));
    ScalarScheme sch;
    sch.q = q;
    sch.v1[0] = detail::random_direction(rng);
    sch.v1[1] = detail::random_direction(rng);
    sch.v2[0] = detail::random_direction(rng);
    sch.v2[2] = detail::random_direction(rng);
    sch.v2[1] = ch.h_r1 * sch.v1[1] / ch.h_r2;  // aligns part 2 at the relay
    sch.v1[2] = ch.h_r2 * sch.v2[2] / ch.h_r1;  // aligns part 3 at the relay

    // Relay directions, unnormalized: each cancels one interference symbol.
    sch.vr[0] = -ch.h_21 * sch.v1[0] / ch.h_2r;  // s1_1 at destination 2
    sch.vr[1] = -ch.h_12 * sch.v2[0] / ch.h_1r;  // s2_1 at destination 1
    sch.vr[2] = -ch.h_12 * sch.v2[1] / ch.h_1r;  // s2_2 at destination 1
    sch.vr[3] = -ch.h_21 * sch.v1[2] / ch.h_2r;  // s1_3 at destination 2

    const double eta1_sq = sch.v1[0] * sch.v1[0] + sch.v1[1] * sch.v1[1] + sch.v1[2] * sch.v1[2];
    const double eta2_sq = sch.v2[0] * sch.v2[0] + sch.v2[1] * sch.v2[1] + sch.v2[2] * sch.v2[2];
    const double eta_r_sq =
        sch.vr[0] * sch.vr[0] + sch.vr[1] * sch.vr[1] + sch.vr[2] * sch.vr[2] + sch.vr[3] * sch.vr[3];

    // The relay forwards two plain symbols and two sums of two symbols; the
    // sums carry twice the per-symbol power.
    const double sym_power = uniform_symbol_power(q);
    const double relay_exact = sym_power * (sch.vr[0] * sch.vr[0] + sch.vr[1] * sch.vr[1]) +
                               2.0 * sym_power * (sch.vr[2] * sch.vr[2] + sch.vr[3] * sch.vr[3]);

    const double denom = std::max({q * std::sqrt(eta1_sq), q * std::sqrt(eta2_sq),
                                   q * std::sqrt(eta_r_sq), std::sqrt(relay_exact)});
    sch.a_const = std::sqrt(p) / denom;
    sch.b_const = sch.a_const;
    return sch;
}

/// One enumerated constellation point and the integer tuple producing it.
struct ConstellationPoint {
    double value = 0.0;
    std::array<int, 4> tuple{};
};

/// The noise-free values the relay can observe: the four integer symbols
/// (s1_1, s2_1, s1_2 + s2_2, s1_3 + s2_3) scaled by their effective receive
/// coefficients. Sorted ascending by value, ties by tuple.
struct ReceivedConstellation {
    std::vector<ConstellationPoint> points;
    double d_min = 0.0;
    /// Two distinct tuples with live coefficients collided: the channel
    /// coefficients are (numerically) rationally dependent.
    bool rationally_dependent = false;
};

/// Effective receive coefficients at the relay for (s1_1, s2_1, t2, t3).
inline std::array<double, 4> relay_coefficients(const ScalarChannel& ch,
                                                const ScalarScheme& sch) {
    return {sch.a_const * ch.h_r1 * sch.v1[0], sch.a_const * ch.h_r2 * sch.v2[0],
            sch.a_const * ch.h_r1 * sch.v1[1], sch.a_const * ch.h_r1 * sch.v1[2]};
}

namespace detail {

struct BoxSpec {
    std::array<int, 4> bound{};  // coordinate i ranges over [-bound[i], bound[i]]
};

inline std::vector<ConstellationPoint> enumerate_box(const std::array<double, 4>& coeff,
                                                     const BoxSpec& box) {
    std::size_t count = 1;
    for (int b : box.bound) count *= static_cast<std::size_t>(2 * b + 1);
    std::vector<ConstellationPoint> points;
    points.reserve(count);
    for (int a = -box.bound[0]; a <= box.bound[0]; ++a)
        for (int b = -box.bound[1]; b <= box.bound[1]; ++b)
            for (int c = -box.bound[2]; c <= box.bound[2]; ++c)
                for (int d = -box.bound[3]; d <= box.bound[3]; ++d)
                    points.push_back({coeff[0] * a + coeff[1] * b + coeff[2] * c + coeff[3] * d,
                                      {a, b, c, d}});
    std::sort(points.begin(), points.end(), [](const auto& x, const auto& y) {
        if (x.value != y.value) return x.value < y.value;
        return x.tuple < y.tuple;
    });
    return points;
}

/// Minimum adjacent gap, skipping structural duplicates (tuples that differ
/// only along zero coefficients). A near-zero gap across live coefficients
/// marks rational dependence.
inline void scan_min_distance(const std::vector<ConstellationPoint>& points,
                              const std::array<double, 4>& coeff, double collision_scale,
                              double& d_min, bool& dependent) {
    d_min = 0.0;
    dependent = false;
    const double threshold = 1e-13 * collision_scale;
    bool found = false;
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double gap = points[i].value - points[i - 1].value;
        if (gap <= threshold) {
            bool live = false;
            for (int k = 0; k < 4; ++k)
                if (points[i].tuple[k] != points[i - 1].tuple[k] && coeff[k] != 0.0) live = true;
            if (live) {
                dependent = true;
                d_min = gap;
                return;
            }
            continue;  // structural duplicate, not a distance
        }
        if (!found || gap < d_min) {
            d_min = gap;
            found = true;
        }
    }
}

inline const ConstellationPoint* nearest_point(const std::vector<ConstellationPoint>& points,
                                               double y) {
    const auto it = std::lower_bound(
        points.begin(), points.end(), y,
        [](const ConstellationPoint& p, double v) { return p.value < v; });
    const ConstellationPoint* right = (it == points.end()) ? nullptr : &*it;
    const ConstellationPoint* left = (it == points.begin()) ? nullptr : &*(it - 1);
    if (!left) return right;
    if (!right) return left;
    const double dl = y - left->value;
    const double dr = right->value - y;
    if (dl < dr) {
        // lex-smallest tuple within the equal-value run ending at `left`
        while (left != &points.front() && (left - 1)->value == left->value) --left;
        return left;
    }
    if (dr < dl) return right;  // first of its run is already lex-smallest
    // exact tie between two values: pick the lex-smaller tuple
    while (left != &points.front() && (left - 1)->value == left->value) --left;
    return left->tuple < right->tuple ? left : right;
}

}  // namespace detail

/// Exhaustively enumerates the relay's received constellation:
/// s1, s2 in [-q, q], the two sums in [-2q, 2q]. d_min is the exact
/// brute-force minimum distance between distinct values.
inline ReceivedConstellation enumerate_received_constellation(const ScalarChannel& ch,
                                                              const ScalarScheme& sch,
                                                              std::uint64_t budget = 100000000) {
    const int q = sch.q;
    const std::uint64_t tuples = static_cast<std::uint64_t>(2 * q + 1) * (2 * q + 1) *
                                 (4 * q + 1) * (4 * q + 1);
    if (tuples > budget)
        throw EnumerationBudgetError("constellation with q=" + std::to_string(q) + " needs " +
                                     std::to_string(tuples) + " tuples, budget is " +
                                     std::to_string(budget));
    const auto coeff = relay_coefficients(ch, sch);
    ReceivedConstellation c;
    c.points = detail::enumerate_box(coeff, detail::BoxSpec{{q, q, 2 * q, 2 * q}});
    detail::scan_min_distance(c.points, coeff, std::abs(sch.a_const), c.d_min,
                              c.rationally_dependent);
    return c;
}

/// Nearest-point decoding of (s1_1, s2_1, s1_2+s2_2, s1_3+s2_3) from the
/// relay observation. Distance ties resolve to the lexicographically
/// smallest tuple.
inline std::array<int, 4> relay_estimate_scalar(double y_r, const ReceivedConstellation& c) {
    return detail::nearest_point(c.points, y_r)->tuple;
}

/// Effective coefficients of the four symbols a destination resolves,
/// ordered (desired part 1, part 2, part 3, cross symbol). The cross symbol
/// is s2_3 at destination 1 and s1_2 at destination 2.
inline std::array<double, 4> destination_coefficients(const ScalarChannel& ch,
                                                      const ScalarScheme& sch, int which) {
    const double a = sch.a_const, b = sch.b_const;
    if (which == 1)
        return {a * ch.h_11 * sch.v1[0] + b * ch.h_1r * sch.vr[0],
                a * ch.h_11 * sch.v1[1] + b * ch.h_1r * sch.vr[2],
                a * ch.h_11 * sch.v1[2] + b * ch.h_1r * sch.vr[3],
                a * ch.h_12 * sch.v2[2] + b * ch.h_1r * sch.vr[3]};
    if (which == 2)
        return {a * ch.h_22 * sch.v2[0] + b * ch.h_2r * sch.vr[1],
                a * ch.h_22 * sch.v2[1] + b * ch.h_2r * sch.vr[2],
                a * ch.h_22 * sch.v2[2] + b * ch.h_2r * sch.vr[3],
                a * ch.h_21 * sch.v1[1] + b * ch.h_2r * sch.vr[2]};
    throw ArgumentError("destination id must be 1 or 2");
}

/// Total (direct plus relayed) coefficients of the two symbols the relay
/// neutralizes at the given destination; zero up to rounding by design.
inline std::array<double, 2> neutralized_coefficients(const ScalarChannel& ch,
                                                      const ScalarScheme& sch, int which) {
    const double a = sch.a_const, b = sch.b_const;
    if (which == 1)
        return {a * ch.h_12 * sch.v2[0] + b * ch.h_1r * sch.vr[1],
                a * ch.h_12 * sch.v2[1] + b * ch.h_1r * sch.vr[2]};
    if (which == 2)
        return {a * ch.h_21 * sch.v1[0] + b * ch.h_2r * sch.vr[0],
                a * ch.h_21 * sch.v1[2] + b * ch.h_2r * sch.vr[3]};
    throw ArgumentError("destination id must be 1 or 2");
}

/// Noise-free constellation a destination observes; all four symbols range
/// over [-q, q].
struct DestinationConstellation {
    std::vector<ConstellationPoint> points;
    std::array<double, 4> coeff{};
    int which = 1;
};

inline DestinationConstellation build_destination_constellation(const ScalarChannel& ch,
                                                                const ScalarScheme& sch,
                                                                int which) {
    DestinationConstellation d;
    d.which = which;
    d.coeff = destination_coefficients(ch, sch, which);
    d.points = detail::enumerate_box(d.coeff, detail::BoxSpec{{sch.q, sch.q, sch.q, sch.q}});
    return d;
}

/// Nearest-point decode at a destination: returns the desired triple plus
/// the residual cross symbol.
inline std::array<int, 4> destination_decode(double y, const DestinationConstellation& d) {
    return detail::nearest_point(d.points, y)->tuple;
}

/// Convenience form that enumerates the destination constellation per call.
inline std::array<int, 4> destination_decode_scalar(double y, int which, const ScalarChannel& ch,
                                                    const ScalarScheme& sch) {
    return destination_decode(y, build_destination_constellation(ch, sch, which));
}

/// Fano-style lower bound on the per-submessage rate in bits:
/// max(0, (1 - ser) * log2(2q - 1) - 1).
inline double rate_lower_bound(double ser, int q) {
    if (ser < 0.0 || ser > 1.0) throw ArgumentError("symbol error rate must be in [0, 1]");
    if (q < 1) throw ArgumentError("constellation bound q must be >= 1");
    return std::max(0.0, (1.0 - ser) * std::log2(2.0 * q - 1.0) - 1.0);
}

}  // namespace ainsim::scalar
