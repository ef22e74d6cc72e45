#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <numbers>

#include "p2wave/errors.hpp"
#include "p2wave/spectrum.hpp"

using namespace p2wave;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST(Symbols, DeltaValues) {
    EXPECT_NEAR(delta(0.0), 225.0, 1e-12);
    EXPECT_NEAR(delta(pi), 1.0, 1e-12);
    EXPECT_NEAR(delta(pi / 2), 124.0, 1e-12);
    EXPECT_THROW(delta(-0.1), ValidationError);
    EXPECT_THROW(delta(3.2), ValidationError);
}

TEST(Symbols, BranchLimits) {
    EXPECT_NEAR(symbol(Branch::Acoustic, pi), 10.0, 1e-12);
    EXPECT_NEAR(symbol(Branch::Optic, pi), 12.0, 1e-12);
    EXPECT_NEAR(symbol(Branch::Optic, 0.0), 60.0, 1e-12);
    EXPECT_EQ(symbol(Branch::Acoustic, 0.0), 0.0);
    EXPECT_EQ(symbol(Branch::Resonant, 1.0), 10.0);
}

TEST(Symbols, HalfPiClosedForms) {
    const double s = std::sqrt(31.0);
    EXPECT_NEAR(symbol(Branch::Acoustic, pi / 2), 60.0 / (13.0 + 2.0 * s), 1e-13);
    EXPECT_NEAR(symbol(Branch::Optic, pi / 2), (52.0 + 8.0 * s) / 3.0, 1e-12);
    EXPECT_LT(symbol(Branch::Acoustic, pi / 2), 3.0);
    EXPECT_GT(symbol(Branch::Optic, pi / 2), 30.0);
}

TEST(Symbols, BothBranchesSolveTheQuadratic) {
    for (int i = 0; i <= 1000; ++i) {
        const double eta = pi * i / 1000.0, c = std::cos(eta);
        for (Branch b : {Branch::Acoustic, Branch::Optic}) {
            const double L = symbol(b, eta);
            const double q = (3 - c) * L * L - 2 * L * (52 + 8 * c) + 240 * (1 - c);
            EXPECT_LE(std::abs(q), 1e-11 * (4 * L * L + 120 * L + 480)) << eta;
        }
    }
}

TEST(Symbols, RangesAndMonotonicity) {
    double prev_a = -1.0, prev_o = 61.0;
    for (int i = 1; i < 2000; ++i) {
        const double eta = pi * i / 2000.0;
        const double La = symbol(Branch::Acoustic, eta), Lo = symbol(Branch::Optic, eta);
        EXPECT_GT(La, prev_a);
        EXPECT_LT(Lo, prev_o);
        EXPECT_LT(La, 10.0);
        EXPECT_GT(Lo, 12.0);
        EXPECT_LE(Lo, 60.0);
        prev_a = La;
        prev_o = Lo;
    }
}

TEST(Symbols, FrequencyIsSquareRoot) {
    for (double eta : {1e-9, 1e-4, 0.3, 1.7, 3.1}) {
        EXPECT_NEAR(frequency(Branch::Acoustic, eta), std::sqrt(symbol(Branch::Acoustic, eta)), 1e-14);
        EXPECT_NEAR(frequency(Branch::Optic, eta), std::sqrt(symbol(Branch::Optic, eta)), 1e-13);
    }
    // lambda^a(eta) ~ eta without cancellation
    EXPECT_NEAR(frequency(Branch::Acoustic, 1e-9) / 1e-9, 1.0, 1e-12);
}

TEST(GroupVelocity, EndpointValues) {
    EXPECT_NEAR(group_velocity(Branch::Acoustic, 0.0), 1.0, 1e-14);
    EXPECT_NEAR(group_velocity(Branch::Acoustic, pi), 0.0, 1e-12);
    EXPECT_NEAR(group_velocity(Branch::Optic, pi), 0.0, 1e-12);
    EXPECT_NEAR(group_velocity(Branch::Optic, 0.0), 0.0, 1e-12);
    EXPECT_THROW(group_velocity(Branch::Resonant, 1.0), ValidationError);
}

TEST(GroupVelocity, SignsOnTheInterior) {
    for (double eta = 0.1; eta <= 3.0 + 1e-12; eta += 0.1) {
        EXPECT_GT(group_velocity(Branch::Acoustic, eta), 0.0) << eta;
        EXPECT_LT(group_velocity(Branch::Optic, eta), 0.0) << eta;
    }
}

TEST(GroupVelocity, AgreesWithCentralDifferences) {
    const double step = 1e-6;
    for (int i = 1; i < 100; ++i) {
        const double eta = pi * i / 100.0;
        for (Branch b : {Branch::Acoustic, Branch::Optic}) {
            const double fd = (frequency(b, eta + step) - frequency(b, eta - step)) / (2 * step);
            EXPECT_NEAR(group_velocity(b, eta), fd, 1e-6) << to_string(b) << ' ' << eta;
        }
    }
}

TEST(Weights, SmallW) {
    EXPECT_DOUBLE_EQ(w_of(0.0), 1.0);
    EXPECT_NEAR(w_of(10.0), -1.0, 1e-15);
    const GridParams g = GridParams::make(31);
    for (int k = 1; k <= g.N; ++k) {
        const double c = std::cos(k * pi * g.h);
        EXPECT_NEAR(w_of(eigenpair(g, Mode::acoustic(k)).Lambda), c, 1e-12);
        EXPECT_NEAR(w_of(eigenpair(g, Mode::optic(k)).Lambda), c, 1e-12);
    }
}

TEST(Weights, WtildeAnchors) {
    EXPECT_NEAR(3.0 * weight(Weight::Wtilde, 60.0), 10.0, 1e-12);
    EXPECT_NEAR(3.0 * weight(Weight::Wtilde, 12.0), 6.0, 1e-12);
}

TEST(Weights, ObservabilityWeightAtZeroAndSign) {
    EXPECT_NEAR(weight(Weight::W, 0.0), 2.0, 1e-14);
    const double x2 = 60.0 / (1.0 + std::sqrt(20.0));
    EXPECT_NEAR(19 * x2 * x2 + 120 * x2 - 3600, 0.0, 1e-9);
    EXPECT_GT(x2, 10.0);
    EXPECT_LT(x2, 12.0);
    for (int i = 1; i < 1000; ++i) {
        EXPECT_GT(weight(Weight::W, 10.0 * i / 1000.0), 0.0);
        EXPECT_GT(weight(Weight::W, 12.0 + 48.0 * i / 1000.0), 0.0);
    }
}

TEST(Weights, PoleGuard) {
    const double x2 = 60.0 / (1.0 + std::sqrt(20.0));
    EXPECT_THROW(weight(Weight::Wtilde, x2), SingularityError);
    EXPECT_THROW(weight(Weight::W1, 10.0), SingularityError);
    EXPECT_THROW(weight(Weight::W1, x2), SingularityError);
    EXPECT_NEAR(weight(Weight::Wtilde, 10.0), 0.0, 1e-15);
}

TEST(Weights, AlphaVariant) {
    for (double L : {0.5, 3.0, 9.0, 13.0, 30.0, 59.0})
        EXPECT_NEAR(weight_alpha(0.5, L), weight(Weight::W1, L), 1e-12 * std::abs(weight(Weight::W1, L)));
    // W1 vanishes like Lambda^2 at the origin
    const double r1 = weight(Weight::W1, 1e-2) / 1e-4, r2 = weight(Weight::W1, 1e-3) / 1e-6;
    EXPECT_NEAR(r1 / r2, 1.0, 2e-2);
    EXPECT_GT(std::abs(r2), 0.0);
    // alpha = 0 has a nonzero limit
    EXPECT_GT(std::abs(weight_alpha(0.0, 1e-8)), 1e-3);
}

TEST(Eigenpairs, InvariantsOfClosedForms) {
    const GridParams g = GridParams::make(31);
    for (const Mode& m : canonical_modes(g)) {
        const EigenPair p = eigenpair(g, m);
        EXPECT_NEAR(p.Lambda_h, p.Lambda / (g.h * g.h), 1e-9 * p.Lambda_h);
        EXPECT_NEAR(p.lambda_h * p.lambda_h, p.Lambda_h, 1e-9 * p.Lambda_h);
        if (m.branch == Branch::Resonant) {
            EXPECT_EQ(p.Lambda, 10.0);
            continue;
        }
        if (m.branch == Branch::Acoustic) {
            EXPECT_GT(p.Lambda, 0.0);
            EXPECT_LT(p.Lambda, 10.0);
        } else {
            EXPECT_GT(p.Lambda, 12.0);
            EXPECT_LT(p.Lambda, 60.0);
        }
        const double ratio = p.n * (40 + p.Lambda) / (4 * (10 - p.Lambda)) * std::cos(m.k * pi * g.h / 2);
        EXPECT_NEAR(p.m, ratio, 1e-10 * std::max(1.0, std::abs(ratio)));
    }
}

TEST(Eigenpairs, CanonicalOrdering) {
    const GridParams g = GridParams::make(5);
    const auto modes = canonical_modes(g);
    ASSERT_EQ(static_cast<int>(modes.size()), g.dim());
    EXPECT_EQ(modes.front(), Mode::acoustic(1));
    EXPECT_EQ(modes[5], Mode::optic(1));
    EXPECT_EQ(modes.back(), Mode::resonant());
    for (int i = 0; i < g.dim(); ++i) EXPECT_EQ(mode_index(g, mode_at(g, i)), i);
    EXPECT_EQ(Mode::acoustic(3).label(), "a3");
    EXPECT_EQ(Mode::resonant().label(), "r");
    EXPECT_THROW(mode_index(g, Mode::acoustic(6)), ValidationError);
}

TEST(Eigenpairs, ResonantVector) {
    const GridParams g = GridParams::make(9);
    // unnormalized: nodes 0, midpoints (-1)^j
    CoeffVector raw(static_cast<std::size_t>(g.dim()), 0.0);
    for (int j = 0; j <= g.N; ++j) raw[static_cast<std::size_t>(midpoint_index(g, j))] = (j % 2 == 0) ? 1.0 : -1.0;
    EXPECT_NEAR(inner_h(raw, raw, 0, g), 8.0 / 15.0, 1e-14);
    const CoeffVector phi = assemble_eigenvector(g, Mode::resonant());
    const double amp = std::sqrt(15.0) / (2.0 * std::sqrt(2.0));
    for (int j = 0; j <= g.N; ++j) EXPECT_NEAR(midpoint_value(phi, g, j), (j % 2 == 0 ? 1 : -1) * amp, 1e-14);
    for (int j = 1; j <= g.N; ++j) EXPECT_EQ(node_value(phi, g, j), 0.0);
}

TEST(Eigenpairs, GeneralizedResidualAndOrthonormality) {
    const GridParams g = GridParams::make(19);
    const ModalBasis modes(g);
    const FemOperators& ops = modes.ops();
    for (int a = 0; a < modes.size(); ++a) {
        const auto& phi = modes.vector(a);
        const auto s = ops.stiffness().apply(phi), m = ops.mass().apply(phi);
        double r = 0.0, n = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            r += std::pow(s[i] - modes.pair(a).Lambda_h * m[i], 2);
            n += s[i] * s[i];
        }
        EXPECT_LE(std::sqrt(r), 1e-10 * std::sqrt(n)) << modes.pair(a).mode.label();
        for (int b = a; b < modes.size(); ++b)
            EXPECT_NEAR(ops.inner(phi, modes.vector(b), 0), a == b ? 1.0 : 0.0, 1e-10);
    }
}

TEST(Eigenpairs, UnitNormForAllModes) {
    const GridParams g = GridParams::make(31);
    for (const Mode& m : canonical_modes(g)) {
        const CoeffVector phi = assemble_eigenvector(g, m);
        EXPECT_NEAR(inner_h(phi, phi, 0, g), 1.0, 1e-12) << m.label();
    }
}

TEST(BruteForce, MatchesClosedFormsForNine) {
    const auto t0 = std::chrono::steady_clock::now();
    const GridParams g = GridParams::make(9);
    const DenseSpectrum d = brute_force_spectrum(g);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_LT(secs, 1.0);
    ASSERT_EQ(d.Lambda_h.size(), 19u);
    std::vector<double> closed;
    for (const Mode& m : canonical_modes(g)) closed.push_back(eigenpair(g, m).Lambda_h);
    std::sort(closed.begin(), closed.end());
    for (std::size_t i = 0; i < closed.size(); ++i)
        EXPECT_NEAR(d.Lambda_h[i], closed[i], 1e-8 * closed[i]) << i;
    EXPECT_NEAR(closed[9], 10.0 / (g.h * g.h), 1e-9);  // resonant sits between the branches
}

TEST(BruteForce, SingleNode) {
    const GridParams g = GridParams::make(1);
    const DenseSpectrum d = brute_force_spectrum(g);
    ASSERT_EQ(d.Lambda_h.size(), 3u);
    const double want[3] = {eigenpair(g, Mode::acoustic(1)).Lambda_h, 10.0 / (g.h * g.h),
                            eigenpair(g, Mode::optic(1)).Lambda_h};
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(d.Lambda_h[static_cast<std::size_t>(i)], want[i], 1e-9 * want[i]);
}

TEST(BruteForce, CountAndScaleLimit) {
    for (int N : {2, 5, 12}) EXPECT_EQ(brute_force_spectrum(GridParams::make(N)).Lambda_h.size(), std::size_t(2 * N + 1));
    EXPECT_THROW(brute_force_spectrum(GridParams::make(21)), ValidationError);
}

TEST(ObservabilityIdentity, AllModesOnTheLadder) {
    for (int N : {9, 31, 99, 199}) {
        const ModalBasis modes(GridParams::make(N));
        for (int m = 0; m < modes.size(); ++m) {
            const EigenPair& p = modes.pair(m);
            const auto& phi = modes.vector(m);
            if (p.mode.branch == Branch::Resonant) continue;
            const double lhs = modes.ops().inner(phi, phi, 1) * weight(Weight::W, p.Lambda);
            const double tr = node_value(phi, modes.grid(), N) / modes.grid().h;
            EXPECT_LE(std::abs(lhs - tr * tr), 1e-9 * tr * tr) << N << ' ' << p.mode.label();
        }
    }
}

TEST(ObservabilityIdentity, ResonantConstant) {
    for (int N : {9, 31, 99, 199}) {
        const GridParams g = GridParams::make(N);
        const CoeffVector phi = assemble_eigenvector(g, Mode::resonant());
        const double lhs = inner_h(phi, phi, 1, g), mid = midpoint_value(phi, g, N) / g.h;
        EXPECT_LE(std::abs(lhs - 16.0 / 3.0 * mid * mid), 1e-12 * lhs);
    }
}

TEST(ObservabilityIdentity, EnergyNormRelationUnnormalized) {
    const GridParams g = GridParams::make(23);
    for (const Mode& m : {Mode::acoustic(4), Mode::optic(7), Mode::resonant()}) {
        CoeffVector raw = assemble_eigenvector(g, m);
        for (auto& x : raw) x *= 3.7;
        const double L = eigenpair(g, m).Lambda / (g.h * g.h);
        EXPECT_NEAR(inner_h(raw, raw, 1, g), L * inner_h(raw, raw, 0, g), 1e-11 * L * inner_h(raw, raw, 0, g));
    }
}

TEST(ModalBasis, TracesMatchClosedForm) {
    const GridParams g = GridParams::make(17);
    const ModalBasis modes(g);
    for (int m = 0; m < modes.size(); ++m) {
        const EigenPair& p = modes.pair(m);
        if (p.mode.branch == Branch::Resonant) {
            EXPECT_EQ(modes.trace(m), 0.0);
            continue;
        }
        const double sign = (p.mode.k % 2 == 0) ? 1.0 : -1.0;
        const double want = sign * p.n * std::sin(p.mode.k * pi * g.h) / g.h;
        EXPECT_NEAR(modes.trace(m), want, 1e-10 * std::abs(want));
        EXPECT_NEAR(modes.trace(m), -node_value(modes.vector(m), g, g.N) / g.h, 1e-10 * std::abs(want));
        EXPECT_NEAR(modes.trace(m) * modes.trace(m), p.Lambda_h * weight(Weight::W, p.Lambda), 1e-9 * p.Lambda_h);
    }
}

TEST(Dispersion, CurveRows) {
    const auto rows = dispersion_curve(65);
    ASSERT_EQ(rows.size(), 65u);
    EXPECT_EQ(rows.front().eta, 0.0);
    EXPECT_DOUBLE_EQ(rows.back().eta, pi);
    EXPECT_NEAR(rows.front().vg_a, 1.0, 1e-12);
    EXPECT_NEAR(rows.back().Lambda_a, 10.0, 1e-12);
    EXPECT_THROW(dispersion_curve(1), ValidationError);
}
