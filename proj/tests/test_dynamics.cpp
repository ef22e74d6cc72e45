#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "p2wave/dynamics.hpp"
#include "p2wave/errors.hpp"

using namespace p2wave;

namespace {

constexpr double pi = std::numbers::pi;

CoeffVector random_vector(const GridParams& g, std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    CoeffVector u(static_cast<std::size_t>(g.dim()));
    for (auto& x : u) x = d(rng);
    return u;
}

CoeffVector low_mode_mix(const ModalBasis& b, std::initializer_list<std::pair<Mode, double>> terms) {
    CoeffVector u(static_cast<std::size_t>(b.grid().dim()), 0.0);
    for (const auto& [m, c] : terms) {
        const auto& phi = b.vector(b.index(m));
        for (std::size_t i = 0; i < u.size(); ++i) u[i] += c * phi[i];
    }
    return u;
}

double max_diff(const CoeffVector& a, const CoeffVector& b) {
    double r = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
    return r;
}

double max_abs(const CoeffVector& a) {
    double r = 0.0;
    for (double x : a) r = std::max(r, std::abs(x));
    return r;
}

}  // namespace

TEST(ExpIntegral, AgainstSimpson) {
    for (double w : {0.0, 1e-9, 0.5, -3.0, 40.0}) {
        for (double T : {0.3, 2.5}) {
            const int n = 20000;
            cplx s{};
            for (int i = 0; i <= n; ++i) {
                const double t = T * i / n;
                const double c = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
                s += c * std::polar(1.0, w * t);
            }
            s *= T / (3.0 * n);
            EXPECT_NEAR(std::abs(exp_integral(w, T) - s), 0.0, 1e-10) << w << ' ' << T;
        }
    }
    EXPECT_NEAR(exp_integral(0.0, 2.0).real(), 2.0, 1e-15);
    EXPECT_NEAR(std::abs(exp_integral(pi, 2.0)), 0.0, 1e-15);
}

TEST(Decompose, SingleModeDisplacement) {
    const ModalBasis b(GridParams::make(9));
    const int m = b.index(Mode::acoustic(2));
    const CoeffVector U0 = b.vector(m), U1(U0.size(), 0.0);
    const ModalState s = decompose(U0, U1, b, 1.0);
    for (int q = 0; q < b.size(); ++q) {
        const double want = (q == m) ? 0.5 : 0.0;
        EXPECT_NEAR(std::abs(s.plus[static_cast<std::size_t>(q)] - want), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(s.minus[static_cast<std::size_t>(q)] - want), 0.0, 1e-12);
    }
}

TEST(Decompose, SingleModeVelocity) {
    const ModalBasis b(GridParams::make(9));
    const int m = b.index(Mode::optic(3));
    const double lam = b.pair(m).lambda_h;
    const CoeffVector U0(static_cast<std::size_t>(b.grid().dim()), 0.0), U1 = b.vector(m);
    const ModalState s = decompose(U0, U1, b);
    // plus - minus = 1/(i lambda)
    EXPECT_NEAR(std::abs(s.plus[static_cast<std::size_t>(m)] - cplx(0, -0.5 / lam)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(s.minus[static_cast<std::size_t>(m)] - cplx(0, 0.5 / lam)), 0.0, 1e-12);
}

TEST(Decompose, RoundTripRandomStates) {
    std::mt19937_64 rng(7);
    for (int N : {9, 31, 99}) {
        const ModalBasis b(GridParams::make(N));
        const CoeffVector U0 = random_vector(b.grid(), rng), U1 = random_vector(b.grid(), rng);
        const ModalState s = decompose(U0, U1, b, 0.7);
        const StatePair r = reconstruct(s, 0.7, b);
        EXPECT_LE(max_diff(r.U, U0), 1e-10 * max_abs(U0)) << N;
        EXPECT_LE(max_diff(r.Ut, U1), 1e-10 * max_abs(U1)) << N;
    }
}

TEST(Decompose, RejectsWrongSize) {
    const ModalBasis b(GridParams::make(5));
    EXPECT_THROW(decompose(CoeffVector(3), CoeffVector(11), b), ValidationError);
}

TEST(Energy, SingleModeIsHalfEigenvalue) {
    const ModalBasis b(GridParams::make(19));
    for (const Mode& md : {Mode::acoustic(1), Mode::optic(5), Mode::resonant()}) {
        const int m = b.index(md);
        const CoeffVector U1(b.vector(m).size(), 0.0);
        const ModalState s = decompose(b.vector(m), U1, b);
        EXPECT_NEAR(energy(s, b), 0.5 * b.pair(m).Lambda_h, 1e-10 * b.pair(m).Lambda_h);
        EXPECT_NEAR(energy_direct(b.vector(m), U1, b.ops()), 0.5 * b.pair(m).Lambda_h, 1e-10 * b.pair(m).Lambda_h);
    }
}

TEST(Energy, ConservedByExactPropagator) {
    std::mt19937_64 rng(11);
    const ModalBasis b(GridParams::make(31));
    const ModalState s = decompose(random_vector(b.grid(), rng), random_vector(b.grid(), rng), b, 2.0);
    const double e0 = energy(s, b);
    for (double t : {0.0, 0.37, 1.1, 2.0}) {
        const StatePair st = reconstruct(s, t, b);
        EXPECT_NEAR(energy_direct(st.U, st.Ut, b.ops()), e0, 1e-10 * e0) << t;
    }
    const Trajectory tr = sample_adjoint(s, 50, b);
    ASSERT_EQ(tr.t.size(), 51u);
    for (double e : tr.energy) EXPECT_NEAR(e, e0, 1e-12 * e0);
}

TEST(Traces, NodeValueAndModalAgree) {
    std::mt19937_64 rng(3);
    const ModalBasis b(GridParams::make(15));
    const CoeffVector U0 = random_vector(b.grid(), rng), U1 = random_vector(b.grid(), rng);
    EXPECT_DOUBLE_EQ(boundary_trace(U0, b.grid()), -node_value(U0, b.grid(), 15) / b.grid().h);
    const ModalState s = decompose(U0, U1, b, 1.0);
    for (double t : {0.0, 0.4, 1.0}) {
        const StatePair st = reconstruct(s, t, b);
        EXPECT_NEAR(boundary_trace(s, t, b), boundary_trace(st.U, b.grid()), 1e-9 * max_abs(U0) / b.grid().h);
    }
}

TEST(Traces, SampledAdjointMatchesReconstruct) {
    const ModalBasis b(GridParams::make(9));
    const CoeffVector U0 = low_mode_mix(b, {{Mode::acoustic(1), 1.0}, {Mode::optic(2), 0.3}});
    const ModalState s = decompose(U0, CoeffVector(U0.size(), 0.0), b, 1.5);
    const Trajectory tr = sample_adjoint(s, 30, b);
    for (std::size_t i = 0; i < tr.t.size(); ++i)
        EXPECT_NEAR(tr.trace[i], boundary_trace(reconstruct(s, tr.t[i], b).U, b.grid()), 1e-9);
}

TEST(Newmark, EnergyDrift) {
    const ModalBasis b(GridParams::make(19));
    std::mt19937_64 rng(5);
    const CoeffVector U0 = random_vector(b.grid(), rng), U1 = random_vector(b.grid(), rng);
    const Trajectory tr = newmark_adjoint(U0, U1, 1e-3, 2.0, b.ops());
    const double e0 = tr.energy.back();  // data sit at t = T
    for (double e : tr.energy) EXPECT_LE(std::abs(e - e0), 1e-6 * e0);
}

TEST(Newmark, SecondOrderAgainstExact) {
    const ModalBasis b(GridParams::make(9));
    const CoeffVector U0 = low_mode_mix(b, {{Mode::acoustic(1), 1.0}, {Mode::acoustic(2), 0.5}});
    const CoeffVector U1 = low_mode_mix(b, {{Mode::acoustic(3), 2.0}});
    const double T = 1.0;
    const StatePair exact = reconstruct(decompose(U0, U1, b, T), 0.0, b);
    std::vector<double> err;
    for (double dt : {0.01, 0.005, 0.0025}) {
        const Trajectory tr = newmark_adjoint(U0, U1, dt, T, b.ops());
        EXPECT_NEAR(tr.t.front(), 0.0, 1e-12);
        EXPECT_NEAR(tr.t.back(), T, 1e-12);
        err.push_back(max_diff(tr.final_state.U, exact.U));
    }
    EXPECT_GE(std::log2(err[0] / err[1]), 1.9);
    EXPECT_GE(std::log2(err[1] / err[2]), 1.9);
}

TEST(Newmark, RejectsBadArguments) {
    const ModalBasis b(GridParams::make(3));
    const CoeffVector z(7, 0.0);
    EXPECT_THROW(newmark_adjoint(z, z, 0.0, 1.0, b.ops()), ValidationError);
    EXPECT_THROW(newmark_adjoint(z, z, 0.1, -1.0, b.ops()), ValidationError);
}

TEST(ExpSumSignal, Evaluates) {
    ExpSum v{{cplx(1.0, 0.0), cplx(0.0, 2.0)}, {0.0, 3.0}};
    const double t = 0.4;
    const cplx want = 1.0 + cplx(0, 2) * std::polar(1.0, 3.0 * t);
    EXPECT_NEAR(std::abs(v(t) - want), 0.0, 1e-15);
    SampledSignal s{0.5, {0.0, 1.0, 4.0}};
    EXPECT_DOUBLE_EQ(s(0.25), 0.5);
    EXPECT_DOUBLE_EQ(s(0.75), 2.5);
    EXPECT_DOUBLE_EQ(s(9.0), 4.0);
}

TEST(ControlledSolve, ForcedOscillatorClosedForm) {
    const ModalBasis b(GridParams::make(9));
    const double T = 1.3, w = 2.0;
    const ExpSum v{{cplx(0.5, 0.0), cplx(0.5, 0.0)}, {w, -w}};  // cos(w t)
    const CoeffVector z(static_cast<std::size_t>(b.grid().dim()), 0.0);
    const Trajectory tr = controlled_solve(z, z, v, T, b, SolveMethod::Duhamel, 4);
    for (int m = 0; m < b.size(); ++m) {
        const double lam = b.pair(m).lambda_h;
        const double f = -b.trace(m);
        const double want = f * (std::cos(w * T) - std::cos(lam * T)) / (lam * lam - w * w);
        const double want_t = f * (-w * std::sin(w * T) + lam * std::sin(lam * T)) / (lam * lam - w * w);
        const double got = b.ops().inner(tr.final_state.U, b.vector(m), 0);
        const double got_t = b.ops().inner(tr.final_state.Ut, b.vector(m), 0);
        EXPECT_NEAR(got, want, 1e-10 * (1 + std::abs(f))) << m;
        EXPECT_NEAR(got_t, want_t, 1e-9 * (1 + std::abs(f))) << m;
    }
}

TEST(ControlledSolve, FreeEvolutionMatchesPropagator) {
    const ModalBasis b(GridParams::make(9));
    std::mt19937_64 rng(2);
    const CoeffVector Y0 = random_vector(b.grid(), rng), Y1 = random_vector(b.grid(), rng);
    const Trajectory tr = controlled_solve(Y0, Y1, ExpSum{}, 0.9, b, SolveMethod::Duhamel, 1);
    const StatePair want = reconstruct(decompose(Y0, Y1, b, 0.0), 0.9, b);
    EXPECT_LE(max_diff(tr.final_state.U, want.U), 1e-10 * max_abs(Y0));
}

TEST(ControlledSolve, DuhamelAgreesWithNewmark) {
    const ModalBasis b(GridParams::make(9));
    const ExpSum v{{cplx(0.3, 0.1), cplx(0.3, -0.1)}, {1.5, -1.5}};
    const CoeffVector Y0 = low_mode_mix(b, {{Mode::acoustic(1), 0.4}});
    const CoeffVector Y1(Y0.size(), 0.0);
    const double T = 2.0;
    const Trajectory d = controlled_solve(Y0, Y1, v, T, b, SolveMethod::Duhamel, 200);
    const Trajectory n = controlled_solve(Y0, Y1, v, T, b, SolveMethod::Newmark, 20000);
    EXPECT_LE(max_diff(d.final_state.U, n.final_state.U), 1e-4 * max_abs(d.final_state.U));
    EXPECT_NEAR(d.energy.back(), n.energy.back(), 1e-4 * d.energy.back());
}

TEST(ControlledSolve, SampledAgreesWithExpSum) {
    const ModalBasis b(GridParams::make(9));
    const ExpSum v{{cplx(0.5, 0.0), cplx(0.5, 0.0)}, {1.0, -1.0}};
    const double T = 1.5;
    const int steps = 8000;
    SampledSignal s{T / steps, {}};
    for (int i = 0; i <= steps; ++i) s.values.push_back(v(T * i / steps).real());
    const CoeffVector z(static_cast<std::size_t>(b.grid().dim()), 0.0);
    const Trajectory a = controlled_solve(z, z, v, T, b, SolveMethod::Duhamel, steps);
    const Trajectory c = controlled_solve(z, z, s, T, b, SolveMethod::Duhamel, steps);
    EXPECT_LE(max_diff(a.final_state.U, c.final_state.U), 1e-5 * max_abs(a.final_state.U));
}

TEST(ControlledSolve, Validation) {
    const ModalBasis b(GridParams::make(3));
    const CoeffVector z(7, 0.0);
    EXPECT_THROW(controlled_solve(z, z, ExpSum{}, 0.0, b, SolveMethod::Duhamel, 1), ValidationError);
    EXPECT_THROW(controlled_solve(z, z, ExpSum{}, 1.0, b, SolveMethod::Duhamel, 0), ValidationError);
    EXPECT_THROW(controlled_solve(z, z, ExpSum{{cplx(1)}, {}}, 1.0, b, SolveMethod::Duhamel, 1), ValidationError);
    EXPECT_THROW(controlled_solve(z, z, SampledSignal{}, 1.0, b, SolveMethod::Duhamel, 1), ValidationError);
}
