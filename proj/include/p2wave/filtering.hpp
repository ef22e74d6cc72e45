#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "p2wave/dynamics.hpp"

namespace p2wave {

enum class SubspaceKind { Full, NonResonant, Truncation, BiGrid, BiGridAlpha };

// A filtered class of adjoint data. Truncation thresholds are Lambda values
// (independent of h) and are converted to wavenumbers per grid.
struct SubspaceSpec {
    SubspaceKind kind = SubspaceKind::Full;
    double lambda_a_plus = 5.0;
    double lambda_o_minus = 20.0;
    double lambda_o_plus = 50.0;
    bool with_optic = true;  // truncation only: keep the optic window
    double alpha = 0.5;      // BiGridAlpha only

    static SubspaceSpec full() { return {SubspaceKind::Full}; }
    static SubspaceSpec nonresonant() { return {SubspaceKind::NonResonant}; }
    static SubspaceSpec truncation(double la_plus, double lo_minus, double lo_plus);
    static SubspaceSpec acoustic_truncation(double la_plus);
    static SubspaceSpec bigrid() { return {SubspaceKind::BiGrid}; }
    static SubspaceSpec bigrid_alpha(double alpha);

    void validate() const;
    std::string id() const;
};

std::string to_string(SubspaceKind k);
SubspaceKind parse_subspace_kind(const std::string& s);

// Wavenumber eta in [0, pi] with symbol(b, eta) = Lambda, by bisection.
double invert_symbol(Branch b, double Lambda);

struct TruncationWindow {
    double eta_a_plus = 0.0;
    double eta_o_plus = 0.0;   // lower optic wavenumber (Lambda^o_+)
    double eta_o_minus = 0.0;  // upper optic wavenumber (Lambda^o_-)
    bool with_optic = true;
};

TruncationWindow truncation_window(const SubspaceSpec& spec);
std::vector<Mode> truncation_modes(const GridParams& g, const SubspaceSpec& spec);

// Smallest group velocity over the retained wavenumber windows.
double minimal_group_velocity(const SubspaceSpec& spec);
double minimal_time(const SubspaceSpec& spec);
// gamma = pi * minimal_group_velocity, the uniform gap of the retained frequencies.
double ingham_gap(const SubspaceSpec& spec);
// Smallest distance between distinct retained frequencies +-lambda_h on a grid.
double measured_gap(const ModalBasis& basis, const SubspaceSpec& spec);

void require_odd(const GridParams& g);

// Fine-grid data from (N-1)/2 coarse nodal values at x_{2j}: odd nodes are
// averages of even neighbours, midpoints are alpha times the sum of the end nodes.
CoeffVector make_bigrid_data(const std::vector<double>& coarse, const GridParams& g,
                             double alpha = 0.5);

struct BigridReport {
    double resonant = 0.0;        // |u^r_+-| relative to the coefficient scale
    double mid_frequency = 0.0;   // |u^{a,(N+1)/2}_+-|
    double optic_acoustic = 0.0;  // linear optic/acoustic relations
    double high_low = 0.0;        // linear high/low acoustic relations
    double optic_acoustic_squared = 0.0;
    double high_low_squared = 0.0;

    double max() const;
};

BigridReport verify_bigrid_constraints(const ModalState& state, const ModalBasis& basis);

// psi^k expanded on (acoustic k, optic k, acoustic N+1-k, optic N+1-k).
struct PsiEntry {
    int k = 1;
    std::array<std::pair<int, double>, 4> terms;  // (mode index, coefficient)
};

PsiEntry psi_basis(const ModalBasis& basis, int k);
CoeffVector assemble_psi(const ModalBasis& basis, const PsiEntry& psi);

// Columns of a linear map from constrained coordinates to full modal
// coordinates. Full coordinate q < 2N+1 is (mode q, +), otherwise (mode q-(2N+1), -).
struct ConstrainedBasis {
    int full_dim = 0;
    std::vector<std::vector<std::pair<int, cplx>>> columns;
    std::vector<std::string> labels;

    int dim() const { return static_cast<int>(columns.size()); }
    ModalState state_of(const std::vector<cplx>& c, double T) const;
};

ConstrainedBasis constrained_basis(const ModalBasis& basis, const SubspaceSpec& spec);

// Keeps acoustic modes k <= floor(delta (N+1)).
ModalState project_acoustic(const ModalState& state, double delta, const GridParams& g);

struct EnergyRatio {
    std::vector<double> lo_plus, lo_minus, hi_plus, hi_minus;  // per k = 1..(N-1)/2
    double max_coefficient = 0.0;  // max over k of the four coefficients
    double max_sum = 0.0;          // max over k of lo + hi for either sign
    double max_lo_plus = 0.0;
};

EnergyRatio energy_ratio_bigrid(const GridParams& g, double alpha = 0.5);

// Energy of bi-grid data from its acoustic low-frequency coefficients.
double bigrid_energy_constrained(const ModalState& state, const ModalBasis& basis);
// Energy of linear data (L_h x L_h) from its acoustic coefficients.
double linear_energy_fourier(const ModalState& state, const ModalBasis& basis);
// Energy of linear data from nodal values only.
double linear_energy_nodal(const CoeffVector& U0, const CoeffVector& U1, const GridParams& g);

}  // namespace p2wave
