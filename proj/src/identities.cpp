#include "p2wave/identities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "p2wave/errors.hpp"

namespace p2wave {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

CoeffVector random_vector(const GridParams& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CoeffVector v(static_cast<std::size_t>(g.dim()));
    for (auto& x : v) x = u(rng);
    return v;
}

IdentityRow check(std::string name, int N, double residual, double tol) {
    return {std::move(name), N, residual, tol, residual <= tol ? "pass" : "fail"};
}

bool is_bigrid(const SubspaceSpec& s) { return s.kind == SubspaceKind::BiGrid || s.kind == SubspaceKind::BiGridAlpha; }

}  // namespace

double eigen_residual(const ModalBasis& modes) {
    const FemOperators& ops = modes.ops();
    double worst = 0.0;
    for (int m = 0; m < modes.size(); ++m) {
        const CoeffVector& phi = modes.vector(m);
        const auto s = ops.stiffness().apply(phi);
        const auto mm = ops.mass().apply(phi);
        const double L = modes.pair(m).Lambda_h;
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < phi.size(); ++i) {
            num += (s[i] - L * mm[i]) * (s[i] - L * mm[i]);
            den += (L * mm[i]) * (L * mm[i]);
        }
        worst = std::max(worst, std::sqrt(num / den));
    }
    return worst;
}

double observability_identity_residual(const ModalBasis& modes) {
    const FemOperators& ops = modes.ops();
    double worst = 0.0;
    for (int m = 0; m < modes.size(); ++m) {
        const EigenPair& p = modes.pair(m);
        if (p.mode.branch == Branch::Resonant) continue;
        const CoeffVector& phi = modes.vector(m);
        const double lhs = ops.inner(phi, phi, 1) * weight(Weight::W, p.Lambda);
        const double rhs = modes.trace(m) * modes.trace(m);
        worst = std::max(worst, std::abs(lhs - rhs) / rhs);
    }
    return worst;
}

double resonant_identity_residual(const ModalBasis& modes) {
    const GridParams& g = modes.grid();
    const CoeffVector& phi = modes.vector(modes.resonant_index());
    const double lhs = modes.ops().inner(phi, phi, 1);
    const double mid = midpoint_value(phi, g, g.N) / g.h;  // phi^r_{N+1/2}
    return std::abs(lhs - 16.0 / 3.0 * mid * mid) / lhs;
}

double norm_representation_residual(const GridParams& g, std::uint64_t seed, int samples, int order) {
    if (order != 0 && order != 1) throw ValidationError("norm representation exists for orders 0 and 1");
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const CoeffVector u = random_vector(g, rng);
        const double a = inner_h(u, u, order, g);
        const double b = order == 1 ? norm_representation_h1(u, g) : norm_representation_h0(u, g);
        worst = std::max(worst, std::abs(a - b) / a);
    }
    return worst;
}

double bigrid_constraint_residual(const ModalBasis& modes, std::uint64_t seed, int samples) {
    const GridParams& g = modes.grid();
    require_odd(g);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t nc = static_cast<std::size_t>((g.N - 1) / 2);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        std::vector<double> c0(nc), c1(nc);
        for (auto& x : c0) x = u(rng);
        for (auto& x : c1) x = u(rng);
        const ModalState st = decompose(make_bigrid_data(c0, g), make_bigrid_data(c1, g), modes);
        worst = std::max(worst, verify_bigrid_constraints(st, modes).max());
    }
    return worst;
}

std::vector<IdentityRow> identity_suite(const IdentityConfig& cfg) {
    cfg.spec.validate();
    if (cfg.ladder.empty()) throw ValidationError("identity suite needs at least one N");
    if (cfg.samples < 1) throw ValidationError("identity suite needs at least one sample");
    const bool bigrid = is_bigrid(cfg.spec);
    if (bigrid)
        for (int N : cfg.ladder)
            if (N % 2 == 0) throw ValidationError("bi-grid identities need odd N, got N=" + std::to_string(N));

    std::vector<IdentityRow> rows;
    std::vector<double> ratio_max, alpha_max;
    std::vector<int> odd_ns;
    for (int N : cfg.ladder) {
        const GridParams g = GridParams::make(N);
        const ModalBasis modes(g);
        rows.push_back(check("eigen_residual", N, eigen_residual(modes), 1e-10));
        rows.push_back(check("observability_identity", N, observability_identity_residual(modes), 1e-9));
        rows.push_back(check("resonant_identity", N, resonant_identity_residual(modes), 1e-12));
        rows.push_back(check("norm_representation_h0", N, norm_representation_residual(g, cfg.seed, cfg.samples, 0), 1e-12));
        rows.push_back(check("norm_representation_h1", N, norm_representation_residual(g, cfg.seed, cfg.samples, 1), 1e-12));
        if (N % 2 == 1 && N >= 3) {
            odd_ns.push_back(N);
            rows.push_back(check("bigrid_constraints", N, bigrid_constraint_residual(modes, cfg.seed, cfg.samples), 1e-9));
            const EnergyRatio er = energy_ratio_bigrid(g);
            ratio_max.push_back(er.max_coefficient);
            rows.push_back({"energy_ratio_max", N, er.max_coefficient, kNaN, "info"});
            if (cfg.spec.kind == SubspaceKind::BiGridAlpha) {
                const EnergyRatio ea = energy_ratio_bigrid(g, cfg.spec.alpha);
                alpha_max.push_back(ea.max_lo_plus);
                rows.push_back({"energy_ratio_alpha_lo_plus", N, ea.max_lo_plus, kNaN, "info"});
            }
        }
    }
    if (ratio_max.size() >= 2) {
        const auto [lo, hi] = std::minmax_element(ratio_max.begin(), ratio_max.end());
        rows.push_back(check("energy_ratio_spread", 0, *hi / *lo, 1.5));
    }
    if (alpha_max.size() >= 2) {
        // Growth of the alpha-variant constant along the ladder; large growth means no uniform bound.
        const double growth = alpha_max.back() / alpha_max.front();
        rows.push_back({"energy_ratio_alpha_growth", 0, growth, 2.0, growth >= 2.0 ? "unbounded" : "info"});
    }
    return rows;
}

bool all_pass(const std::vector<IdentityRow>& rows) {
    return std::none_of(rows.begin(), rows.end(), [](const IdentityRow& r) { return r.status == "fail"; });
}

}  // namespace p2wave
