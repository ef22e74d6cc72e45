#pragma once

#include <limits>
#include <string>
#include <vector>

#include "p2wave/filtering.hpp"

namespace p2wave {

// Observation Gramian and energy form in the coordinates of a constrained basis:
//   c* G c = int_0^T |B_h U(t)|^2 dt,   c* E c = energy of U.
struct Gramian {
    double T = 0.0;
    ConstrainedBasis basis;
    CMatrix G;
    CMatrix E;
    // Full-coordinate frequencies omega_q = s lambda_m and traces b_q.
    std::vector<double> omega;
    std::vector<double> trace;

    int dim() const { return basis.dim(); }
};

Gramian gramian(const ModalBasis& modes, const SubspaceSpec& spec, double T);
Gramian gramian(const ModalBasis& modes, const ConstrainedBasis& basis, double T);

// Full-coordinate frequencies and traces shared by the Gramian and HUM code.
void full_coordinates(const ModalBasis& modes, std::vector<double>& omega, std::vector<double>& trace);

struct ObsReport {
    double T = 0.0;
    std::string spec;
    double C_h = 0.0;      // observability constant (infinite when unobservable)
    double inv_c_h = 0.0;  // admissibility constant 1/c_h
    std::vector<cplx> extremal_min;  // coordinates attaining C_h
    std::vector<cplx> extremal_max;  // coordinates attaining 1/c_h
    double gap = std::numeric_limits<double>::quiet_NaN();
    int dim = 0;
    bool observable = true;
    std::string diagnostic;
    int sweeps = 0;
};

ObsReport observability_report(const ModalBasis& modes, const SubspaceSpec& spec, double T);
double observability_constant(const ModalBasis& modes, const SubspaceSpec& spec, double T);
double admissibility_constant(const ModalBasis& modes, const SubspaceSpec& spec, double T);

struct NormBound {
    double max_W = 0.0;          // sup of W over [0,10] and [12,60]
    double argmax_W = 0.0;
    double max_W_optic = 0.0;    // max of W over [12,60]
    double argmax_W_optic = 0.0;
    double combined = 0.0;       // max{max_W, 3/16}
    double eigenbasis = 0.0;     // max over modes of |b|^2 / Lambda_h on this grid
    double strict_trace = 0.0;   // ||B_h S^{-1/2}||^2 = (S^{-1})_{NN} / h^2
};

NormBound matrix_norm_bound(const GridParams& g);

EigenDecomposition<cplx> jacobi_hermitian_eigen(const CMatrix& a, double tol = 1e-12);

}  // namespace p2wave
