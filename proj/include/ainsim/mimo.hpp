#pragma once

// Source and relay beamformer construction for the MIMO scheme, M a multiple
// of 4. Each source splits its message into three parts of r = M/4 streams.
// The sources steer parts 2 and 3 so they arrive pairwise aligned at the
// relay; the relay re-broadcasts the four resolvable combinations along
// directions that cancel two interference parts at each destination. Each
// destination is then left with exactly M resolvable streams.

#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "ainsim/channel.hpp"
#include "ainsim/errors.hpp"

namespace ainsim::mimo {

/// Transmit beams for both sources and the relay.
///
/// v1[j], v2[j] are the M-by-r beam matrices of source 1 and 2 for message
/// part j+1; their columns are unit norm. vr[j] carries relay symbol j+1 and
/// is deliberately left unnormalized: the cancellation identities pin the
/// exact vectors, and relay power is accounted by a single back-off in the
/// link simulator. lambda2/lambda3 hold the positive diagonal alignment
/// scales of the part-2 and part-3 combinations seen by the relay.
struct BeamformerSet {
    std::array<Eigen::MatrixXcd, 3> v1;
    std::array<Eigen::MatrixXcd, 3> v2;
    std::array<Eigen::MatrixXcd, 4> vr;
    Eigen::VectorXd lambda2;
    Eigen::VectorXd lambda3;
    int r = 0;

    [[nodiscard]] bool has_relay_beams() const { return vr[0].size() > 0; }
};

/// Per-destination effective channel blocks after neutralization, plus the
/// relative residual of the coefficients that the relay was meant to cancel.
struct EffectiveChannels {
    // Destination 1 sees [s1_part1, s1_part2, s1_part3, s2_part3].
    std::array<Eigen::MatrixXcd, 4> d1_blocks;
    // Destination 2 sees [s2_part1, s2_part2, s2_part3, s1_part2].
    std::array<Eigen::MatrixXcd, 4> d2_blocks;
    double residual_d1 = 0.0;
    double residual_d2 = 0.0;

    [[nodiscard]] Eigen::MatrixXcd d1_stacked() const { return stack(d1_blocks); }
    [[nodiscard]] Eigen::MatrixXcd d2_stacked() const { return stack(d2_blocks); }

   private:
    static Eigen::MatrixXcd stack(const std::array<Eigen::MatrixXcd, 4>& blocks) {
        const auto rows = blocks[0].rows();
        const auto r = blocks[0].cols();
        Eigen::MatrixXcd s(rows, 4 * r);
        for (int j = 0; j < 4; ++j) s.middleCols(j * r, r) = blocks[j];
        return s;
    }
};

namespace detail {

inline Eigen::MatrixXcd random_unit_columns(int m, int r, Rng& rng) {
    Eigen::MatrixXcd v(m, r);
    for (int k = 0; k < r; ++k) {
        Eigen::VectorXcd z(m);
        for (int i = 0; i < m; ++i) z(i) = rng.cnormal();
        v.col(k) = z / z.norm();
    }
    return v;
}

inline Eigen::PartialPivLU<Eigen::MatrixXcd> checked_lu(const Eigen::MatrixXcd& h,
                                                        const char* name) {
    if (condition_number(h) >= kSingularCondition)
        throw SingularChannelError(std::string("singular channel matrix ") + name);
    return Eigen::PartialPivLU<Eigen::MatrixXcd>(h);
}

}  // namespace detail

/// Draws the free source beams and aligns the dependent ones so both aligned
/// pairs coincide at the relay columnwise with a positive real scale.
///
/// Free: v1 parts 1 and 2, v2 parts 1 and 3. Aligned: v2 part 2 follows v1
/// part 2, v1 part 3 follows v2 part 3. The returned set has no relay beams
/// yet; see build_relay_beams.
inline BeamformerSet build_source_beams(const MimoChannel& ch, RunSeed seed) {
    if (ch.m % 4 != 0 || ch.m < 4)
        throw UnsupportedDimensionError("antenna count must be a positive multiple of 4");
    const int m = ch.m;
    const int r = m / 4;

    Rng rng(seed.derived(kStreamBeams));
    BeamformerSet beams;
    beams.r = r;
    beams.v1[0] = detail::random_unit_columns(m, r, rng);
    beams.v1[1] = detail::random_unit_columns(m, r, rng);
    beams.v2[0] = detail::random_unit_columns(m, r, rng);
    beams.v2[2] = detail::random_unit_columns(m, r, rng);

    const auto lu_r1 = detail::checked_lu(ch.h_r1, "source1->relay");
    const auto lu_r2 = detail::checked_lu(ch.h_r2, "source2->relay");

    // v2 part 2, column l: normalize(inv(h_r2) * h_r1 * v1_2[l]). The scale
    // discarded by the normalization is exactly lambda2(l).
    beams.v2[1].resize(m, r);
    beams.lambda2.resize(r);
    for (int l = 0; l < r; ++l) {
        const Eigen::VectorXcd u = lu_r2.solve(ch.h_r1 * beams.v1[1].col(l));
        beams.lambda2(l) = u.norm();
        beams.v2[1].col(l) = u / beams.lambda2(l);
    }

    // v1 part 3, column l: normalize(inv(h_r1) * h_r2 * v2_3[l]).
    beams.v1[2].resize(m, r);
    beams.lambda3.resize(r);
    for (int l = 0; l < r; ++l) {
        const Eigen::VectorXcd u = lu_r1.solve(ch.h_r2 * beams.v2[2].col(l));
        beams.lambda3(l) = u.norm();
        beams.v1[2].col(l) = u / beams.lambda3(l);
    }
    return beams;
}

/// Completes a beamformer set with the four relay beam matrices. Each one
/// steers a forwarded symbol so that its relayed path exactly cancels one
/// interference part at the unintended destination:
///   vr1 = -inv(h_2r) h_21 v1_1   (kills s1 part 1 at destination 2)
///   vr2 = -inv(h_1r) h_12 v2_1   (kills s2 part 1 at destination 1)
///   vr3 = -inv(h_1r) h_12 v2_2   (kills s2 part 2 at destination 1)
///   vr4 = -inv(h_2r) h_21 v1_3   (kills s1 part 3 at destination 2)
inline BeamformerSet build_relay_beams(const MimoChannel& ch, BeamformerSet beams) {
    const auto lu_1r = detail::checked_lu(ch.h_1r, "relay->destination1");
    const auto lu_2r = detail::checked_lu(ch.h_2r, "relay->destination2");
    beams.vr[0] = -lu_2r.solve(ch.h_21 * beams.v1[0]);
    beams.vr[1] = -lu_1r.solve(ch.h_12 * beams.v2[0]);
    beams.vr[2] = -lu_1r.solve(ch.h_12 * beams.v2[1]);
    beams.vr[3] = -lu_2r.solve(ch.h_21 * beams.v1[2]);
    return beams;
}

inline BeamformerSet build_beams(const MimoChannel& ch, RunSeed seed) {
    return build_relay_beams(ch, build_source_beams(ch, seed));
}

/// Stacked matrix the relay inverts: the four aligned column groups
/// [h_r1 v1_1 | h_r2 v2_1 | h_r2 v2_2 | h_r1 v1_3] carrying
/// [s1_1, s2_1, lambda2 s1_2 + s2_2, s1_3 + lambda3 s2_3].
inline Eigen::MatrixXcd relay_stacked_matrix(const MimoChannel& ch, const BeamformerSet& beams) {
    const int m = ch.m;
    const int r = beams.r;
    Eigen::MatrixXcd s(m, 4 * r);
    s.middleCols(0 * r, r) = ch.h_r1 * beams.v1[0];
    s.middleCols(1 * r, r) = ch.h_r2 * beams.v2[0];
    s.middleCols(2 * r, r) = ch.h_r2 * beams.v2[1];
    s.middleCols(3 * r, r) = ch.h_r1 * beams.v1[2];
    return s;
}

/// Maximum relative misalignment of the two aligned pairs at the relay.
inline double alignment_residual(const MimoChannel& ch, const BeamformerSet& beams) {
    double worst = 0.0;
    for (int l = 0; l < beams.r; ++l) {
        const Eigen::VectorXcd a2 = ch.h_r1 * beams.v1[1].col(l);
        const Eigen::VectorXcd b2 = ch.h_r2 * beams.v2[1].col(l);
        worst = std::max(worst, (a2 - beams.lambda2(l) * b2).norm() / a2.norm());
        const Eigen::VectorXcd a3 = ch.h_r2 * beams.v2[2].col(l);
        const Eigen::VectorXcd b3 = ch.h_r1 * beams.v1[2].col(l);
        worst = std::max(worst, (a3 - beams.lambda3(l) * b3).norm() / a3.norm());
    }
    return worst;
}

/// Combines direct and relayed paths into the four effective blocks each
/// destination resolves, and measures how completely the two neutralized
/// parts vanished (residual norms relative to the direct-path norm).
inline EffectiveChannels compute_effective_channels(const MimoChannel& ch,
                                                    const BeamformerSet& beams) {
    EffectiveChannels eff;
    const auto lam2 = beams.lambda2.asDiagonal();
    const auto lam3 = beams.lambda3.asDiagonal();

    eff.d1_blocks[0] = ch.h_11 * beams.v1[0] + ch.h_1r * beams.vr[0];
    eff.d1_blocks[1] = ch.h_11 * beams.v1[1] + ch.h_1r * beams.vr[2] * lam2;
    eff.d1_blocks[2] = ch.h_11 * beams.v1[2] + ch.h_1r * beams.vr[3];
    eff.d1_blocks[3] = ch.h_12 * beams.v2[2] + ch.h_1r * beams.vr[3] * lam3;

    eff.d2_blocks[0] = ch.h_22 * beams.v2[0] + ch.h_2r * beams.vr[1];
    eff.d2_blocks[1] = ch.h_22 * beams.v2[1] + ch.h_2r * beams.vr[2];
    eff.d2_blocks[2] = ch.h_22 * beams.v2[2] + ch.h_2r * beams.vr[3] * lam3;
    eff.d2_blocks[3] = ch.h_21 * beams.v1[1] + ch.h_2r * beams.vr[2] * lam2;

    // Neutralized at destination 1: s2 parts 1 and 2.
    const Eigen::MatrixXcd d1_cross1 = ch.h_12 * beams.v2[0];
    const Eigen::MatrixXcd d1_cross2 = ch.h_12 * beams.v2[1];
    eff.residual_d1 =
        std::max((d1_cross1 + ch.h_1r * beams.vr[1]).norm() / d1_cross1.norm(),
                 (d1_cross2 + ch.h_1r * beams.vr[2]).norm() / d1_cross2.norm());

    // Neutralized at destination 2: s1 parts 1 and 3.
    const Eigen::MatrixXcd d2_cross1 = ch.h_21 * beams.v1[0];
    const Eigen::MatrixXcd d2_cross3 = ch.h_21 * beams.v1[2];
    eff.residual_d2 =
        std::max((d2_cross1 + ch.h_2r * beams.vr[0]).norm() / d2_cross1.norm(),
                 (d2_cross3 + ch.h_2r * beams.vr[3]).norm() / d2_cross3.norm());
    return eff;
}

/// Re-picks the part-1 beams to maximize the combined direct-plus-relayed
/// gain at the intended destination while leaving every cancellation intact.
///
/// Destination 1 receives s1 part 1 through (h_11 - h_1r inv(h_2r) h_21) v,
/// which is linear in v, so the unit-norm maximizers are the dominant right
/// singular vectors; column k gets the k-th one. The dependent relay beams
/// vr1 and vr2 are rebuilt, nothing else moves.
inline BeamformerSet diversity_optimize_beams(const MimoChannel& ch, BeamformerSet beams) {
    const auto lu_1r = detail::checked_lu(ch.h_1r, "relay->destination1");
    const auto lu_2r = detail::checked_lu(ch.h_2r, "relay->destination2");

    const Eigen::MatrixXcd g1 = ch.h_11 - ch.h_1r * lu_2r.solve(ch.h_21);
    const Eigen::MatrixXcd g2 = ch.h_22 - ch.h_2r * lu_1r.solve(ch.h_12);

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd1(g1, Eigen::ComputeFullV);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd2(g2, Eigen::ComputeFullV);
    beams.v1[0] = svd1.matrixV().leftCols(beams.r);
    beams.v2[0] = svd2.matrixV().leftCols(beams.r);

    beams.vr[0] = -lu_2r.solve(ch.h_21 * beams.v1[0]);
    beams.vr[1] = -lu_1r.solve(ch.h_12 * beams.v2[0]);
    return beams;
}

/// Relay-side zero forcing: estimates of the 4r aligned combinations.
struct RelayZfResult {
    /// [s1_1; s2_1; lambda2 s1_2 + s2_2; s1_3 + lambda3 s2_3] plus filtered noise.
    Eigen::VectorXcd combinations;
    /// Covariance of the estimation error per unit receive-noise variance:
    /// inv(S) inv(S)^H for the stacked matrix S.
    Eigen::MatrixXcd noise_cov;
};

inline RelayZfResult relay_zero_force(const Eigen::VectorXcd& y_r, const MimoChannel& ch,
                                      const BeamformerSet& beams) {
    const Eigen::MatrixXcd s = relay_stacked_matrix(ch, beams);
    if (condition_number(s) >= kSingularCondition)
        throw RankError("relay stacked matrix is rank deficient");
    const Eigen::MatrixXcd sinv = s.inverse();
    return RelayZfResult{sinv * y_r, sinv * sinv.adjoint()};
}

}  // namespace ainsim::mimo
