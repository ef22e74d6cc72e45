#pragma once

#include <string>
#include <vector>

#include "p2wave/observability.hpp"

namespace p2wave {

// Sine-series coefficients of continuous data against phi^k = sqrt(2) sin(k pi x).
struct ContinuousData {
    std::string name;
    std::vector<double> y0;  // y^{k,0}, k = 1..K
    std::vector<double> y1;  // y^{k,1}

    int modes() const { return static_cast<int>(std::max(y0.size(), y1.size())); }
    double coeff0(int k) const;
    double coeff1(int k) const;
};

// Named data sets: zero, sin (y0 = sin(pi x)), mode1 (y0 = phi^1), parabola
// (y0 = x(1-x)), sin-velocity (y1 = sin(pi x)).
ContinuousData named_data(const std::string& name);
std::vector<std::string> named_data_sets();
double vprime_norm_sq(const ContinuousData& data);

// Discrete target through its modal projections (Y^i, phi_m)_{h,0}.
struct DiscreteTarget {
    std::vector<double> y0;
    std::vector<double> y1;
};

DiscreteTarget target_from_vectors(const CoeffVector& Y0, const CoeffVector& Y1, const ModalBasis& modes);
StatePair target_vectors(const DiscreteTarget& t, const ModalBasis& modes);
// ||(Y1, -Y0)||^2 in V_h'.
double vprime_norm_sq(const DiscreteTarget& t, const ModalBasis& modes);

// Acoustic coefficients from continuous data, optic and resonant set to zero.
DiscreteTarget data_transfer(const ContinuousData& data, const ModalBasis& modes, const SubspaceSpec& spec);

struct ControlProblem {
    const ModalBasis* modes = nullptr;
    double T = 0.0;
    SubspaceSpec spec;
    DiscreteTarget target;
};

std::vector<cplx> rhs_pairing(const ControlProblem& problem, const ConstrainedBasis& basis);

struct ControlResult {
    std::vector<cplx> coeffs;       // minimizer in constrained coordinates
    std::vector<cplx> full_coeffs;  // same in full (mode, sign) coordinates
    ExpSum control;                 // v_h(t) as an exponential sum
    double I_h = 0.0;               // J_h at the minimizer
    double el_residual = 0.0;       // ||G c - r|| / ||r||
    double control_norm_sq = 0.0;   // int_0^T |v_h|^2 = c* G c
    double pairing = 0.0;           // Re(c* r)
    double vprime_sq = 0.0;         // ||(Y1,-Y0)||^2_{V_h'}
    Gramian gram;
};

ControlResult solve_hum(const ControlProblem& problem);
double functional_J(const ControlResult& result, const std::vector<cplx>& c, const std::vector<cplx>& r);

struct VerifyReport {
    double max_pairing = 0.0;           // max_j |<(Y_t(T), -Y(T)), U_j>|
    double max_relative_pairing = 0.0;  // scaled by ||(Y1,-Y0)||_{V'} ||U_j||_V
    double final_norm = 0.0;            // ||(Y_t(T), -Y(T))||_{V_h'}
    double initial_norm = 0.0;          // ||(Y1, -Y0)||_{V_h'}
};

VerifyReport verify_control(const ControlResult& result, const ControlProblem& problem);

struct ContinuousRef {
    int K = 0;
    double T = 0.0;
    ExpSum control;
    double norm_sq = 0.0;
    int iterations = 0;
    double residual = 0.0;
};

ContinuousRef continuous_hum_T2(const ContinuousData& data, int K);
ContinuousRef continuous_hum_galerkin(const ContinuousData& data, int K, double T, double tol = 1e-13);
// int_0^T v e^{i s k pi t} dt for the reference, and the residual against the moment identity.
double moment_residual(const ContinuousRef& ref, const ContinuousData& data);

double l2_norm_sq(const ExpSum& a, double T);
double l2_distance(const ExpSum& a, const ExpSum& b, double T);
std::vector<double> sample(const ExpSum& v, const std::vector<double>& t);

struct StudyRow {
    int N = 0;
    double h = 0.0;
    double L2_error = 0.0;
    double control_norm = 0.0;
    double Ih = 0.0;
    double EL_residual = 0.0;
    double proj_final_norm = 0.0;
};

std::vector<StudyRow> convergence_study(const ContinuousData& data, const SubspaceSpec& spec, double T,
                                        const std::vector<int>& ladder, const ContinuousRef& ref,
                                        int threads = 0);

// Least-squares slope of log(err) against log(h).
double fitted_slope(const std::vector<StudyRow>& rows);

}  // namespace p2wave
