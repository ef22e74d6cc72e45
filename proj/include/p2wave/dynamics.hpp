#pragma once

#include <variant>
#include <vector>

#include "p2wave/spectrum.hpp"

namespace p2wave {

// int_0^T exp(i w t) dt, with a series for |w T| < 1e-6.
cplx exp_integral(double omega, double T);

// Adjoint solution in modal form: data prescribed at time T, and
//   U(t) = sum_m (plus_m e^{i lambda_m (t-T)} + minus_m e^{-i lambda_m (t-T)}) phi_m.
struct ModalState {
    double T = 0.0;
    std::vector<cplx> plus;   // canonical mode order
    std::vector<cplx> minus;

    static ModalState zero(const GridParams& g, double T);
};

struct StatePair {
    CoeffVector U;
    CoeffVector Ut;
};

ModalState decompose(const CoeffVector& U0, const CoeffVector& U1, const ModalBasis& basis,
                     double T = 0.0);
StatePair reconstruct(const ModalState& state, double t, const ModalBasis& basis);

// Modal coefficients (U(t), phi_m)_{h,0} and (U_t(t), phi_m)_{h,0}.
void modal_values(const ModalState& state, double t, const ModalBasis& basis, std::vector<cplx>& u,
                  std::vector<cplx>& ut);

double energy(const ModalState& state, const ModalBasis& basis);
double energy_direct(const CoeffVector& U, const CoeffVector& Ut, const FemOperators& ops);

// -U_N / h, the only nonzero component of B_h U.
double boundary_trace(const CoeffVector& U, const GridParams& g);
double boundary_trace(const ModalState& state, double t, const ModalBasis& basis);

struct Trajectory {
    std::vector<double> t;
    std::vector<double> trace;
    std::vector<double> energy;
    StatePair final_state;  // state at the last time of the integration direction
};

// Boundary traces and energies of the exact propagator on a uniform grid of [0, T].
Trajectory sample_adjoint(const ModalState& state, int steps, const ModalBasis& basis);

// Average-acceleration Newmark (beta = 1/4, gamma = 1/2) for M U'' + S U = 0,
// stepping backwards from the data (U0, U1) prescribed at t = T down to t = 0.
// Samples are returned in ascending time; final_state holds the state at t = 0.
Trajectory newmark_adjoint(const CoeffVector& U0, const CoeffVector& U1, double dt, double T,
                           const FemOperators& ops);

// Finite exponential sum v(t) = sum_j amp_j exp(i omega_j t).
struct ExpSum {
    std::vector<cplx> amp;
    std::vector<double> omega;

    cplx operator()(double t) const;
    std::size_t size() const { return amp.size(); }
};

// Uniform samples v(i dt), i = 0..n-1, linearly interpolated in between.
struct SampledSignal {
    double dt = 0.0;
    std::vector<double> values;

    double operator()(double t) const;
};

using ControlSignal = std::variant<ExpSum, SampledSignal>;

enum class SolveMethod { Duhamel, Newmark };

// Solves M Y'' + S Y = -B_h^* V (forcing v/h on node N) on [0, T] with data
// (Y0, Y1) at t = 0. The trajectory has steps+1 samples on a uniform grid;
// final_state holds (Y(T), Y_t(T)).
Trajectory controlled_solve(const CoeffVector& Y0, const CoeffVector& Y1, const ControlSignal& v,
                            double T, const ModalBasis& basis, SolveMethod method, int steps);

}  // namespace p2wave
