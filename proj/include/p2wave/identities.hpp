#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "p2wave/filtering.hpp"

namespace p2wave {

// One line of the identity suite. A NaN tolerance marks a reported-only value.
struct IdentityRow {
    std::string identity;
    int N = 0;  // 0 for rows that summarize a whole ladder
    double residual = 0.0;
    double tolerance = 0.0;
    std::string status;  // pass, fail, info or unbounded
};

struct IdentityConfig {
    std::vector<int> ladder{9, 19, 31, 39, 99, 199};
    SubspaceSpec spec = SubspaceSpec::bigrid();
    std::uint64_t seed = 1;
    int samples = 100;
};

// Per-mode checks on one grid.
double eigen_residual(const ModalBasis& modes);
double observability_identity_residual(const ModalBasis& modes);  // ||phi||^2_{h,1} W = |phi_N/h|^2
double resonant_identity_residual(const ModalBasis& modes);       // ||phi^r||^2_{h,1} = (16/3)|phi^r_{N+1/2}/h|^2
// Max relative mismatch between the inner-product norms and their quadrature forms.
double norm_representation_residual(const GridParams& g, std::uint64_t seed, int samples, int order);
// Max bi-grid constraint residual over random coarse data (N odd).
double bigrid_constraint_residual(const ModalBasis& modes, std::uint64_t seed, int samples);

std::vector<IdentityRow> identity_suite(const IdentityConfig& cfg);
bool all_pass(const std::vector<IdentityRow>& rows);

}  // namespace p2wave
