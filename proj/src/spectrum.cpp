#include "p2wave/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "p2wave/errors.hpp"

namespace p2wave {

namespace {

constexpr double kPi = std::numbers::pi;

void check_eta(double eta) {
    if (!(eta >= -1e-12 && eta <= kPi + 1e-12)) {
        throw ValidationError("wavenumber outside [0, pi]: " + std::to_string(eta));
    }
}

double cos2_half(double eta) {
    const double c = std::cos(0.5 * eta);
    return c * c;
}

double sin2_half(double eta) {
    const double s = std::sin(0.5 * eta);
    return s * s;
}

double delta_u(double u) { return 1.0 + 268.0 * u - 44.0 * u * u; }

// Throws when |f| is below 1e-13 of its natural scale.
void guard(double f, double scale, const char* what, double Lambda) {
    if (std::abs(f) < 1e-13 * scale) {
        throw SingularityError(std::string("weight pole: ") + what + " vanishes at Lambda = " +
                               std::to_string(Lambda));
    }
}

double q240(double L) { return L * L + 16.0 * L + 240.0; }
double q3600(double L) { return 19.0 * L * L + 120.0 * L - 3600.0; }
double q3600_scale(double L) { return 19.0 * L * L + 120.0 * std::abs(L) + 3600.0; }

double guarded_q3600(double L) {
    const double d = q3600(L);
    guard(d, q3600_scale(L), "19L^2+120L-3600", L);
    return d;
}

double guarded_minus10(double L) {
    const double d = L - 10.0;
    guard(d, std::max(std::abs(L), 10.0), "L-10", L);
    return d;
}

double sqrt_wtilde(double L) {
    const double wt = weight(Weight::Wtilde, L);
    if (wt < 0.0) {
        throw ValidationError("square root of a negative normalization weight at Lambda = " +
                              std::to_string(L));
    }
    return std::sqrt(wt);
}

}  // namespace

std::string to_string(Branch b) {
    switch (b) {
        case Branch::Acoustic: return "acoustic";
        case Branch::Optic: return "optic";
        case Branch::Resonant: return "resonant";
    }
    return "?";
}

std::string Mode::label() const {
    if (branch == Branch::Resonant) return "r";
    return std::string(branch == Branch::Acoustic ? "a" : "o") + std::to_string(k);
}

double delta(double eta) {
    check_eta(eta);
    return delta_u(cos2_half(eta));
}

double symbol(Branch b, double eta) {
    check_eta(eta);
    const double u = cos2_half(eta);
    const double sd = std::sqrt(delta_u(u));
    switch (b) {
        case Branch::Acoustic: return 120.0 * sin2_half(eta) / (11.0 + 4.0 * u + sd);
        case Branch::Optic: return (22.0 + 8.0 * u + 2.0 * sd) / (1.0 + sin2_half(eta));
        case Branch::Resonant: return 10.0;
    }
    return 0.0;
}

double frequency(Branch b, double eta) {
    if (b == Branch::Acoustic) {
        check_eta(eta);
        const double u = cos2_half(eta);
        return std::sqrt(120.0 / (11.0 + 4.0 * u + std::sqrt(delta_u(u)))) * std::sin(0.5 * eta);
    }
    return std::sqrt(symbol(b, eta));
}

double group_velocity(Branch b, double eta) {
    check_eta(eta);
    const double u = cos2_half(eta);
    const double du = -0.5 * std::sin(eta);  // d u / d eta
    const double sd = std::sqrt(delta_u(u));
    const double ddelta = 268.0 - 88.0 * u;
    switch (b) {
        case Branch::Acoustic: {
            // lambda = sqrt(A(u)) sin(eta/2), A = 120 / (11 + 4u + sqrt(Delta)).
            const double den = 11.0 + 4.0 * u + sd;
            const double a = 120.0 / den;
            const double da = -120.0 * (4.0 + ddelta / (2.0 * sd)) / (den * den);
            return 0.5 / std::sqrt(a) * da * du * std::sin(0.5 * eta) +
                   std::sqrt(a) * 0.5 * std::cos(0.5 * eta);
        }
        case Branch::Optic: {
            // Lambda = P(u) / (2 - u).
            const double p = 22.0 + 8.0 * u + 2.0 * sd;
            const double dp = 8.0 + ddelta / sd;
            const double dl = (dp * (2.0 - u) + p) / ((2.0 - u) * (2.0 - u));
            return dl * du / (2.0 * std::sqrt(p / (2.0 - u)));
        }
        case Branch::Resonant:
            throw ValidationError("group velocity is not defined for the resonant mode");
    }
    return 0.0;
}

double w_of(double L) { return (3.0 * L * L - 104.0 * L + 240.0) / q240(L); }

std::string to_string(Weight w) {
    switch (w) {
        case Weight::Wtilde: return "Wtilde";
        case Weight::W: return "W";
        case Weight::W1: return "W1";
        case Weight::W2: return "W2";
        case Weight::W3: return "W3";
        case Weight::W4: return "W4";
        case Weight::W5: return "W5";
    }
    return "?";
}

double weight(Weight which, double L) {
    switch (which) {
        case Weight::Wtilde:
            return (L - 10.0) * q240(L) / guarded_q3600(L);
        case Weight::W:
            return 24.0 * (L - 10.0) * (L - 10.0) * (L - 12.0) * (L - 60.0) /
                   (-guarded_q3600(L) * q240(L));
        case Weight::W1:
            return L * L * q240(L) / (guarded_minus10(L) * guarded_q3600(L));
        case Weight::W2:
            return (60.0 - L) * (L - 10.0) * (L - 12.0) / (q240(L) * q240(L));
        case Weight::W3: {
            const double q = q240(L);
            return (60.0 - L) * (60.0 - L) * std::pow(L - 10.0, 3) * (L - 12.0) * (L - 12.0) /
                   (guarded_q3600(L) * q * q * q);
        }
        case Weight::W4:
            return -L / guarded_minus10(L) * sqrt_wtilde(L);
        case Weight::W5:
            return weight(Weight::W2, L) * sqrt_wtilde(L);
    }
    return 0.0;
}

double weight_alpha(double alpha, double L) {
    const double f = 40.0 - 80.0 * alpha + (1.0 + 8.0 * alpha) * L;
    return q240(L) * f * f / (25.0 * guarded_minus10(L) * guarded_q3600(L));
}

std::vector<Mode> canonical_modes(const GridParams& g) {
    std::vector<Mode> modes;
    modes.reserve(static_cast<std::size_t>(g.dim()));
    for (int k = 1; k <= g.N; ++k) modes.push_back(Mode::acoustic(k));
    for (int k = 1; k <= g.N; ++k) modes.push_back(Mode::optic(k));
    modes.push_back(Mode::resonant());
    return modes;
}

int mode_index(const GridParams& g, const Mode& m) {
    if (m.branch == Branch::Resonant) return 2 * g.N;
    if (m.k < 1 || m.k > g.N) throw ValidationError("mode wavenumber out of range: " + m.label());
    return (m.branch == Branch::Acoustic ? 0 : g.N) + m.k - 1;
}

Mode mode_at(const GridParams& g, int index) {
    if (index < 0 || index > 2 * g.N) throw ValidationError("mode index out of range");
    if (index == 2 * g.N) return Mode::resonant();
    if (index < g.N) return Mode::acoustic(index + 1);
    return Mode::optic(index - g.N + 1);
}

EigenPair eigenpair(const GridParams& g, const Mode& mode) {
    mode_index(g, mode);  // validates k
    EigenPair p;
    p.mode = mode;
    if (mode.branch == Branch::Resonant) {
        p.Lambda = 10.0;
        p.n = 0.0;
        p.m = std::sqrt(15.0) / (2.0 * std::sqrt(2.0));
        p.Lambda_h = p.Lambda / (g.h * g.h);
        p.lambda_h = std::sqrt(10.0) / g.h;
        return p;
    }
    const double eta = mode.k * kPi * g.h;
    p.Lambda = symbol(mode.branch, eta);
    p.Lambda_h = p.Lambda / (g.h * g.h);
    p.lambda_h = frequency(mode.branch, eta) / g.h;
    p.n = std::sqrt(3.0 * weight(Weight::Wtilde, p.Lambda));
    p.m = p.n * (40.0 + p.Lambda) / (4.0 * (10.0 - p.Lambda)) * std::cos(0.5 * eta);
    return p;
}

CoeffVector assemble_eigenvector(const GridParams& g, const Mode& mode) {
    const EigenPair p = eigenpair(g, mode);
    CoeffVector v(static_cast<std::size_t>(g.dim()), 0.0);
    if (mode.branch == Branch::Resonant) {
        for (int j = 0; j <= g.N; ++j)
            v[static_cast<std::size_t>(midpoint_index(g, j))] = (j % 2 == 0 ? 1.0 : -1.0) * p.m;
        return v;
    }
    const double kp = mode.k * kPi;
    for (int j = 1; j <= g.N; ++j)
        v[static_cast<std::size_t>(node_index(g, j))] = p.n * std::sin(kp * node_x(g, j));
    for (int j = 0; j <= g.N; ++j)
        v[static_cast<std::size_t>(midpoint_index(g, j))] = p.m * std::sin(kp * midpoint_x(g, j));
    return v;
}

DenseSpectrum brute_force_spectrum(const GridParams& g) {
    if (g.N > 20) throw ValidationError("brute_force_spectrum is an oracle for N <= 20");
    const std::size_t n = static_cast<std::size_t>(g.dim());
    const RMatrix m = assemble_mass(g).dense();
    const RMatrix s = assemble_stiffness(g).dense();
    const Cholesky<double> chol(m);
    // C = L^{-1} S L^{-T}, built column by column.
    RMatrix tmp(n, n), c(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = s(i, j);
        const std::vector<double> y = chol.solve_lower(col);
        for (std::size_t i = 0; i < n; ++i) tmp(i, j) = y[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> rowv(tmp.row(i), tmp.row(i) + n);
        const std::vector<double> y = chol.solve_lower(rowv);
        for (std::size_t j = 0; j < n; ++j) c(i, j) = y[j];
    }
    const EigenDecomposition<double> eig = jacobi_eigen(c, 1e-12, 100);
    DenseSpectrum out;
    out.Lambda_h = eig.values;
    out.sweeps = eig.sweeps;
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = eig.vectors(i, k);
        out.vectors.push_back(chol.solve_upper(y));
    }
    return out;
}

ModalBasis::ModalBasis(const GridParams& g) : ops_(g) {
    for (const Mode& m : canonical_modes(g)) {
        pairs_.push_back(eigenpair(g, m));
        vectors_.push_back(assemble_eigenvector(g, m));
        if (m.branch == Branch::Resonant) {
            traces_.push_back(0.0);
        } else {
            const double sign = (m.k % 2 == 0) ? 1.0 : -1.0;
            traces_.push_back(sign * pairs_.back().n * std::sin(m.k * kPi * g.h) / g.h);
        }
    }
}

std::vector<DispersionRow> dispersion_curve(int points) {
    if (points < 2) throw ValidationError("dispersion_curve needs at least 2 points");
    std::vector<DispersionRow> rows;
    rows.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double eta = (i == points - 1) ? kPi : kPi * i / (points - 1);
        rows.push_back({eta, symbol(Branch::Acoustic, eta), symbol(Branch::Optic, eta),
                        frequency(Branch::Acoustic, eta), frequency(Branch::Optic, eta),
                        group_velocity(Branch::Acoustic, eta), group_velocity(Branch::Optic, eta)});
    }
    return rows;
}

}  // namespace p2wave
