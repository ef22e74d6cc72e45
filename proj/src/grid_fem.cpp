#include "p2wave/grid_fem.hpp"

#include <cmath>
#include <string>

#include "p2wave/errors.hpp"

namespace p2wave {

GridParams GridParams::make(int N) {
    if (N < 1) throw ValidationError("grid: N must be >= 1, got " + std::to_string(N));
    return GridParams{N, 1.0 / (N + 1)};
}

void check_size(const CoeffVector& u, const GridParams& g) {
    if (static_cast<int>(u.size()) != g.dim()) {
        throw ValidationError("coefficient vector has length " + std::to_string(u.size()) +
                              ", expected " + std::to_string(g.dim()));
    }
}

int node_index(const GridParams& g, int j) {
    if (j < 1 || j > g.N) throw ValidationError("node index out of range");
    return 2 * j - 1;
}

int midpoint_index(const GridParams& g, int j) {
    if (j < 0 || j > g.N) throw ValidationError("midpoint index out of range");
    return 2 * j;
}

double node_value(const CoeffVector& u, const GridParams& g, int j) {
    if (j == 0 || j == g.N + 1) return 0.0;
    return u[static_cast<std::size_t>(node_index(g, j))];
}

double midpoint_value(const CoeffVector& u, const GridParams& g, int j) {
    return u[static_cast<std::size_t>(midpoint_index(g, j))];
}

double node_x(const GridParams& g, int j) { return j * g.h; }
double midpoint_x(const GridParams& g, int j) { return (j + 0.5) * g.h; }

namespace {

// Element matrices in local order (node j, midpoint, node j+1).
constexpr double kMassLocal[3][3] = {{4, 2, -1}, {2, 16, 2}, {-1, 2, 4}};      // times h/30
constexpr double kStiffLocal[3][3] = {{7, -8, 1}, {-8, 16, -8}, {1, -8, 7}};  // times 1/(3h)

BandedSymMatrix assemble(const GridParams& g, const double (&local)[3][3], double factor) {
    BandedSymMatrix a(static_cast<std::size_t>(g.dim()));
    for (int e = 0; e <= g.N; ++e) {
        // Local dofs: node e (absent when e == 0), midpoint e, node e+1 (absent when e == N).
        const int dofs[3] = {e >= 1 ? node_index(g, e) : -1, midpoint_index(g, e),
                             e + 1 <= g.N ? node_index(g, e + 1) : -1};
        for (int r = 0; r < 3; ++r) {
            if (dofs[r] < 0) continue;
            for (int c = r; c < 3; ++c) {
                if (dofs[c] < 0) continue;
                const double v = factor * local[r][c];
                const auto i = static_cast<std::size_t>(dofs[r]), j = static_cast<std::size_t>(dofs[c]);
                a.add(i, j, v);
            }
        }
    }
    return a;
}

}  // namespace

BandedSymMatrix assemble_mass(const GridParams& g) { return assemble(g, kMassLocal, g.h / 30.0); }

BandedSymMatrix assemble_stiffness(const GridParams& g) {
    return assemble(g, kStiffLocal, 1.0 / (3.0 * g.h));
}

FemOperators::FemOperators(const GridParams& g)
    : grid_(g), mass_(assemble_mass(g)), stiff_(assemble_stiffness(g)), stiff_fact_(stiff_) {}

double FemOperators::inner(const CoeffVector& u, const CoeffVector& v, int i) const {
    check_size(u, grid_);
    check_size(v, grid_);
    switch (i) {
        case 1:
            return dot(stiff_.apply(u), v);
        case 0:
            return dot(mass_.apply(u), v);
        case -1:
            return dot(mass_.apply(stiff_fact_.solve(mass_.apply(u))), v);
        default:
            throw ValidationError("inner_h: index must be -1, 0 or 1");
    }
}

double FemOperators::norm(const CoeffVector& u, int i) const {
    return std::sqrt(std::max(0.0, inner(u, u, i)));
}

double inner_h(const CoeffVector& u, const CoeffVector& v, int i, const GridParams& g) {
    return FemOperators(g).inner(u, v, i);
}

double norm_h(const CoeffVector& u, int i, const GridParams& g) { return FemOperators(g).norm(u, i); }

ElementDerivatives discrete_derivatives(const CoeffVector& u, int j, const GridParams& g) {
    check_size(u, g);
    if (j < 0 || j > g.N) throw ValidationError("discrete_derivatives: element index out of range");
    const double fj = node_value(u, g, j);
    const double fm = midpoint_value(u, g, j);
    const double fn = node_value(u, g, j + 1);
    return {-(fn - 4.0 * fm + 3.0 * fj) / g.h, (fj - 4.0 * fm + 3.0 * fn) / g.h, (fn - fj) / g.h};
}

QuarterValues quarter_values(const CoeffVector& u, int j, const GridParams& g) {
    check_size(u, g);
    if (j < 0 || j > g.N) throw ValidationError("quarter_values: element index out of range");
    const double fj = node_value(u, g, j);
    const double fm = midpoint_value(u, g, j);
    const double fn = node_value(u, g, j + 1);
    return {0.375 * fj + 0.75 * fm - 0.125 * fn, -0.125 * fj + 0.75 * fm + 0.375 * fn};
}

double norm_representation_h1(const CoeffVector& u, const GridParams& g) {
    double s = 0.0;
    for (int j = 0; j <= g.N; ++j) {
        const ElementDerivatives d = discrete_derivatives(u, j, g);
        s += d.forward * d.forward + 4.0 * d.midpoint * d.midpoint + d.backward * d.backward;
    }
    return g.h / 6.0 * s;
}

double norm_representation_h0(const CoeffVector& u, const GridParams& g) {
    double s = 0.0;
    for (int j = 0; j <= g.N; ++j) {
        const double fj = node_value(u, g, j);
        const double fm = midpoint_value(u, g, j);
        const double fn = node_value(u, g, j + 1);
        const QuarterValues q = quarter_values(u, j, g);
        s += 7.0 * fj * fj + 32.0 * q.quarter * q.quarter + 12.0 * fm * fm +
             32.0 * q.three_quarters * q.three_quarters + 7.0 * fn * fn;
    }
    return g.h / 90.0 * s;
}

}  // namespace p2wave
