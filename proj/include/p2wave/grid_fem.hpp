#pragma once

#include <vector>

#include "p2wave/linalg.hpp"

namespace p2wave {

// Uniform grid on (0,1) with N interior nodes, h = 1/(N+1).
struct GridParams {
    int N = 1;
    double h = 0.5;

    static GridParams make(int N);
    int dim() const { return 2 * N + 1; }
};

// Coefficients of a P2 function: index i (0-based) holds the value at
// x_{(i+1)/2}. Even i are midpoints, odd i are nodes. The boundary values
// x_0 and x_{N+1} are implicitly zero.
using CoeffVector = std::vector<double>;

// Storage index of node x_j, 1 <= j <= N.
int node_index(const GridParams& g, int j);
// Storage index of midpoint x_{j+1/2}, 0 <= j <= N.
int midpoint_index(const GridParams& g, int j);
// Value at x_{j}, 0 <= j <= N+1 (zero at the boundary).
double node_value(const CoeffVector& u, const GridParams& g, int j);
double midpoint_value(const CoeffVector& u, const GridParams& g, int j);
double node_x(const GridParams& g, int j);
double midpoint_x(const GridParams& g, int j);

// Samples f at every degree of freedom.
template <class F>
CoeffVector sample(const GridParams& g, F&& f) {
    CoeffVector u(static_cast<std::size_t>(g.dim()));
    for (int i = 0; i < g.dim(); ++i) u[static_cast<std::size_t>(i)] = f(0.5 * (i + 1) * g.h);
    return u;
}

BandedSymMatrix assemble_mass(const GridParams& g);
BandedSymMatrix assemble_stiffness(const GridParams& g);

// Mass, stiffness and a factorization of the stiffness, built once per grid.
class FemOperators {
public:
    explicit FemOperators(const GridParams& g);

    const GridParams& grid() const { return grid_; }
    const BandedSymMatrix& mass() const { return mass_; }
    const BandedSymMatrix& stiffness() const { return stiff_; }
    const BandedLDLT& stiffness_factor() const { return stiff_fact_; }

    // (F,G)_{h,i} for i in {-1, 0, 1}.
    double inner(const CoeffVector& u, const CoeffVector& v, int i) const;
    double norm(const CoeffVector& u, int i) const;

private:
    GridParams grid_;
    BandedSymMatrix mass_;
    BandedSymMatrix stiff_;
    BandedLDLT stiff_fact_;
};

double inner_h(const CoeffVector& u, const CoeffVector& v, int i, const GridParams& g);
double norm_h(const CoeffVector& u, int i, const GridParams& g);

struct ElementDerivatives {
    double forward;   // d+ F_j
    double backward;  // d- F_{j+1}
    double midpoint;  // d F_{j+1/2}
};

// One-sided and centered derivatives on element [x_j, x_{j+1}], 0 <= j <= N.
ElementDerivatives discrete_derivatives(const CoeffVector& u, int j, const GridParams& g);

struct QuarterValues {
    double quarter;         // F_{j+1/4}
    double three_quarters;  // F_{j+3/4}
};

QuarterValues quarter_values(const CoeffVector& u, int j, const GridParams& g);

// Element-wise quadrature forms of the squared h,1 and h,0 norms.
double norm_representation_h1(const CoeffVector& u, const GridParams& g);
double norm_representation_h0(const CoeffVector& u, const GridParams& g);

void check_size(const CoeffVector& u, const GridParams& g);

}  // namespace p2wave
