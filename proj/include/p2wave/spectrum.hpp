#pragma once

#include <string>
#include <vector>

#include "p2wave/grid_fem.hpp"

namespace p2wave {

enum class Branch { Acoustic, Optic, Resonant };

std::string to_string(Branch b);

struct Mode {
    Branch branch = Branch::Acoustic;
    int k = 1;  // ignored for the resonant mode

    static Mode acoustic(int k) { return {Branch::Acoustic, k}; }
    static Mode optic(int k) { return {Branch::Optic, k}; }
    static Mode resonant() { return {Branch::Resonant, 0}; }
    std::string label() const;
    bool operator==(const Mode& o) const {
        return branch == o.branch && (branch == Branch::Resonant || k == o.k);
    }
};

struct EigenPair {
    Mode mode;
    double Lambda = 0.0;    // normalized eigenvalue
    double Lambda_h = 0.0;  // Lambda / h^2
    double lambda_h = 0.0;  // sqrt(Lambda_h)
    double n = 0.0;         // nodal amplitude
    double m = 0.0;         // midpoint amplitude
};

// Delta(eta) = 1 + 268 cos^2(eta/2) - 44 cos^4(eta/2), eta in [0, pi].
double delta(double eta);

// Normalized Fourier symbols; the resonant "symbol" is the constant 10.
double symbol(Branch b, double eta);
// sqrt(symbol), evaluated in a form that is accurate near eta = 0.
double frequency(Branch b, double eta);
// d/d eta of frequency(b, eta). Not defined for the resonant mode.
double group_velocity(Branch b, double eta);

double w_of(double Lambda);

enum class Weight { Wtilde, W, W1, W2, W3, W4, W5 };

std::string to_string(Weight w);
double weight(Weight which, double Lambda);
double weight_alpha(double alpha, double Lambda);

// Modes in canonical order: acoustic k=1..N, optic k=1..N, resonant.
std::vector<Mode> canonical_modes(const GridParams& g);
int mode_index(const GridParams& g, const Mode& m);
Mode mode_at(const GridParams& g, int index);

EigenPair eigenpair(const GridParams& g, const Mode& m);
CoeffVector assemble_eigenvector(const GridParams& g, const Mode& m);

struct DenseSpectrum {
    std::vector<double> Lambda_h;      // ascending
    std::vector<CoeffVector> vectors;  // M-orthonormal
    int sweeps = 0;
};

// Dense generalized eigensolve of (S, M) for validation, N <= 20.
DenseSpectrum brute_force_spectrum(const GridParams& g);

// All eigenpairs, assembled eigenvectors and boundary traces of one grid.
class ModalBasis {
public:
    explicit ModalBasis(const GridParams& g);

    const GridParams& grid() const { return ops_.grid(); }
    const FemOperators& ops() const { return ops_; }
    int size() const { return static_cast<int>(pairs_.size()); }
    const EigenPair& pair(int idx) const { return pairs_[static_cast<std::size_t>(idx)]; }
    const CoeffVector& vector(int idx) const { return vectors_[static_cast<std::size_t>(idx)]; }
    // b_m = -phi_{m,N}/h; exactly zero for the resonant mode.
    double trace(int idx) const { return traces_[static_cast<std::size_t>(idx)]; }
    int index(const Mode& m) const { return mode_index(grid(), m); }
    int resonant_index() const { return size() - 1; }

private:
    FemOperators ops_;
    std::vector<EigenPair> pairs_;
    std::vector<CoeffVector> vectors_;
    std::vector<double> traces_;
};

struct DispersionRow {
    double eta, Lambda_a, Lambda_o, lambda_a, lambda_o, vg_a, vg_o;
};

std::vector<DispersionRow> dispersion_curve(int points);

}  // namespace p2wave
