#include "p2wave/observability.hpp"

#include <algorithm>
#include <cmath>

#include "p2wave/errors.hpp"

namespace p2wave {

void full_coordinates(const ModalBasis& modes, std::vector<double>& omega, std::vector<double>& trace) {
    const int nm = modes.size();
    omega.assign(static_cast<std::size_t>(2 * nm), 0.0);
    trace.assign(static_cast<std::size_t>(2 * nm), 0.0);
    for (int m = 0; m < nm; ++m) {
        const auto i = static_cast<std::size_t>(m);
        omega[i] = modes.pair(m).lambda_h;
        omega[i + static_cast<std::size_t>(nm)] = -modes.pair(m).lambda_h;
        trace[i] = trace[i + static_cast<std::size_t>(nm)] = modes.trace(m);
    }
}

Gramian gramian(const ModalBasis& modes, const ConstrainedBasis& cb, double T) {
    if (!(T > 0.0)) throw ValidationError("gramian: T must be positive");
    if (cb.dim() == 0) throw ValidationError("gramian: empty coordinate set");
    Gramian gr;
    gr.T = T;
    gr.basis = cb;
    full_coordinates(modes, gr.omega, gr.trace);
    const int nm = modes.size();
    const std::size_t n = static_cast<std::size_t>(cb.dim());
    gr.G = CMatrix(n, n);
    gr.E = CMatrix(n, n);
    auto lambda_of = [&](int q) { return modes.pair(q % nm).Lambda_h; };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            cplx g{}, e{};
            for (const auto& [p, lp] : cb.columns[i]) {
                const double bp = gr.trace[static_cast<std::size_t>(p)];
                for (const auto& [q, lq] : cb.columns[j]) {
                    const cplx w = std::conj(lp) * lq;
                    if (p == q) e += w * lambda_of(p);
                    const double bq = gr.trace[static_cast<std::size_t>(q)];
                    if (bp == 0.0 || bq == 0.0) continue;
                    // int_0^T conj(e^{i w_p (t-T)}) e^{i w_q (t-T)} dt = I(w_p - w_q, T)
                    g += w * bp * bq *
                         exp_integral(gr.omega[static_cast<std::size_t>(p)] - gr.omega[static_cast<std::size_t>(q)], T);
                }
            }
            gr.G(i, j) = g;
            gr.G(j, i) = std::conj(g);
            gr.E(i, j) = e;
            gr.E(j, i) = std::conj(e);
        }
        gr.G(i, i) = cplx(gr.G(i, i).real(), 0.0);
        gr.E(i, i) = cplx(gr.E(i, i).real(), 0.0);
    }
    return gr;
}

Gramian gramian(const ModalBasis& modes, const SubspaceSpec& spec, double T) {
    return gramian(modes, constrained_basis(modes, spec), T);
}

EigenDecomposition<cplx> jacobi_hermitian_eigen(const CMatrix& a, double tol) {
    return jacobi_eigen(a, tol, 100);
}

ObsReport observability_report(const ModalBasis& modes, const SubspaceSpec& spec, double T) {
    const Gramian gr = gramian(modes, spec, T);
    ObsReport rep;
    rep.T = T;
    rep.spec = spec.id();
    rep.dim = gr.dim();
    if (spec.kind == SubspaceKind::Truncation) rep.gap = measured_gap(modes, spec);
    const std::size_t n = static_cast<std::size_t>(gr.dim());

    // A coordinate with an identically zero Gramian row but positive energy is
    // invisible to the observation: the observability constant is infinite.
    for (std::size_t i = 0; i < n; ++i) {
        bool zero = true;
        for (std::size_t j = 0; j < n && zero; ++j) zero = (gr.G(i, j) == cplx{});
        if (zero && gr.E(i, i).real() > 0.0) {
            rep.observable = false;
            rep.C_h = std::numeric_limits<double>::infinity();
            rep.diagnostic = "resonant mode unobservable: coordinate " + gr.basis.labels[i] +
                             " has an identically zero observation";
            rep.extremal_min.assign(n, cplx{});
            rep.extremal_min[i] = 1.0;
            break;
        }
    }

    // Normalize by the energy: A = L^{-1} G L^{-*} with E = L L*.
    const Cholesky<cplx> chol(gr.E);
    CMatrix tmp(n, n), a(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<cplx> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = gr.G(i, j);
        const std::vector<cplx> y = chol.solve_lower(col);
        for (std::size_t i = 0; i < n; ++i) tmp(i, j) = y[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        // Row i of tmp L^{-*} = conj(L^{-1} conj(row i)).
        std::vector<cplx> r(n);
        for (std::size_t j = 0; j < n; ++j) r[j] = std::conj(tmp(i, j));
        const std::vector<cplx> y = chol.solve_lower(r);
        for (std::size_t j = 0; j < n; ++j) a(i, j) = std::conj(y[j]);
    }
    const EigenDecomposition<cplx> eig = jacobi_hermitian_eigen(a, 1e-12);
    rep.sweeps = eig.sweeps;
    auto coords = [&](std::size_t col) {
        std::vector<cplx> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = eig.vectors(i, col);
        return chol.solve_upper(y);
    };
    rep.inv_c_h = eig.values.back();
    rep.extremal_max = coords(n - 1);
    if (rep.observable) {
        const double mu = eig.values.front();
        if (mu <= 0.0) {
            rep.observable = false;
            rep.C_h = std::numeric_limits<double>::infinity();
            rep.diagnostic = "observation Gramian is singular on this subspace";
        } else {
            rep.C_h = 1.0 / mu;
        }
        rep.extremal_min = coords(0);
    }
    return rep;
}

double observability_constant(const ModalBasis& modes, const SubspaceSpec& spec, double T) {
    return observability_report(modes, spec, T).C_h;
}

double admissibility_constant(const ModalBasis& modes, const SubspaceSpec& spec, double T) {
    return observability_report(modes, spec, T).inv_c_h;
}

namespace {

struct Peak {
    double value, arg;
};

Peak maximize_W(double a, double b) {
    auto W = [](double L) { return weight(Weight::W, L); };
    constexpr int samples = 20001;
    Peak best{W(a), a};
    int ibest = 0;
    for (int i = 1; i < samples; ++i) {
        const double x = a + (b - a) * i / (samples - 1);
        const double v = W(x);
        if (v > best.value) {
            best = {v, x};
            ibest = i;
        }
    }
    const double step = (b - a) / (samples - 1);
    double lo = std::max(a, a + (ibest - 1) * step), hi = std::min(b, a + (ibest + 1) * step);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        const double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        if (W(x1) > W(x2)) hi = x2;
        else lo = x1;
    }
    const double x = 0.5 * (lo + hi);
    if (W(x) > best.value) best = {W(x), x};
    return best;
}

}  // namespace

NormBound matrix_norm_bound(const GridParams& g) {
    NormBound nb;
    // W is regular on both closed ranges; the supremum over the open ranges is
    // the maximum over their closures.
    const Peak ac = maximize_W(0.0, 10.0);
    const Peak op = maximize_W(12.0, 60.0);
    nb.max_W_optic = op.value;
    nb.argmax_W_optic = op.arg;
    if (ac.value >= op.value) {
        nb.max_W = ac.value;
        nb.argmax_W = ac.arg;
    } else {
        nb.max_W = op.value;
        nb.argmax_W = op.arg;
    }
    nb.combined = std::max(nb.max_W, 3.0 / 16.0);

    const ModalBasis modes(g);
    for (int m = 0; m < modes.size(); ++m) {
        const double b = modes.trace(m);
        nb.eigenbasis = std::max(nb.eigenbasis, b * b / modes.pair(m).Lambda_h);
    }
    std::vector<double> e(static_cast<std::size_t>(g.dim()), 0.0);
    const auto iN = static_cast<std::size_t>(node_index(g, g.N));
    e[iN] = 1.0;
    nb.strict_trace = modes.ops().stiffness_factor().solve(e)[iN] / (g.h * g.h);
    return nb;
}

}  // namespace p2wave
