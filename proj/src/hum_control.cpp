#include "p2wave/hum_control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "p2wave/errors.hpp"
#include "p2wave/thread_pool.hpp"

namespace p2wave {

namespace {

constexpr double kPi = std::numbers::pi;

double signed_unit(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

// Merges terms whose frequencies agree to rounding, so that nearly equal sums
// cancel amplitude by amplitude instead of through the quadratic form.
ExpSum merged(const ExpSum& a) {
    std::vector<std::size_t> order(a.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a.omega[x] < a.omega[y]; });
    ExpSum out;
    for (std::size_t i : order) {
        const double w = a.omega[i];
        if (!out.omega.empty() && std::abs(out.omega.back() - w) <= 1e-12 * std::max(1.0, std::abs(w))) {
            out.amp.back() += a.amp[i];
        } else {
            out.omega.push_back(w);
            out.amp.push_back(a.amp[i]);
        }
    }
    return out;
}

}  // namespace

double ContinuousData::coeff0(int k) const {
    return (k >= 1 && k <= static_cast<int>(y0.size())) ? y0[static_cast<std::size_t>(k - 1)] : 0.0;
}

double ContinuousData::coeff1(int k) const {
    return (k >= 1 && k <= static_cast<int>(y1.size())) ? y1[static_cast<std::size_t>(k - 1)] : 0.0;
}

std::vector<std::string> named_data_sets() { return {"zero", "sin", "mode1", "parabola", "sin-velocity"}; }

ContinuousData named_data(const std::string& name) {
    ContinuousData d;
    d.name = name;
    if (name == "zero") return d;
    if (name == "sin") {
        d.y0 = {1.0 / std::sqrt(2.0)};  // (sin(pi x), sqrt(2) sin(pi x))
        return d;
    }
    if (name == "mode1") {
        d.y0 = {1.0};
        return d;
    }
    if (name == "sin-velocity") {
        d.y1 = {1.0 / std::sqrt(2.0)};
        return d;
    }
    if (name == "parabola") {
        // int_0^1 x(1-x) sin(k pi x) dx = 2 (1 - (-1)^k) / (k pi)^3
        const int K = 256;
        d.y0.resize(K);
        for (int k = 1; k <= K; ++k) {
            const double kp = k * kPi;
            d.y0[static_cast<std::size_t>(k - 1)] = std::sqrt(2.0) * 2.0 * (1.0 - signed_unit(k)) / (kp * kp * kp);
        }
        return d;
    }
    throw ValidationError("unknown data set '" + name + "'");
}

double vprime_norm_sq(const ContinuousData& data) {
    double s = 0.0;
    for (int k = 1; k <= data.modes(); ++k) {
        const double a = data.coeff1(k) / (k * kPi);
        s += a * a + data.coeff0(k) * data.coeff0(k);
    }
    return s;
}

DiscreteTarget target_from_vectors(const CoeffVector& Y0, const CoeffVector& Y1, const ModalBasis& modes) {
    check_size(Y0, modes.grid());
    check_size(Y1, modes.grid());
    DiscreteTarget t;
    t.y0.resize(static_cast<std::size_t>(modes.size()));
    t.y1.resize(static_cast<std::size_t>(modes.size()));
    for (int m = 0; m < modes.size(); ++m) {
        t.y0[static_cast<std::size_t>(m)] = modes.ops().inner(Y0, modes.vector(m), 0);
        t.y1[static_cast<std::size_t>(m)] = modes.ops().inner(Y1, modes.vector(m), 0);
    }
    return t;
}

StatePair target_vectors(const DiscreteTarget& t, const ModalBasis& modes) {
    const std::size_t n = static_cast<std::size_t>(modes.grid().dim());
    StatePair out{CoeffVector(n, 0.0), CoeffVector(n, 0.0)};
    for (int m = 0; m < modes.size(); ++m) {
        const auto& phi = modes.vector(m);
        const double a = t.y0[static_cast<std::size_t>(m)];
        const double b = t.y1[static_cast<std::size_t>(m)];
        for (std::size_t i = 0; i < n; ++i) {
            out.U[i] += a * phi[i];
            out.Ut[i] += b * phi[i];
        }
    }
    return out;
}

double vprime_norm_sq(const DiscreteTarget& t, const ModalBasis& modes) {
    if (t.y0.size() != static_cast<std::size_t>(modes.size()) || t.y1.size() != t.y0.size())
        throw ValidationError("target size does not match the modal basis");
    double s = 0.0;
    for (int m = 0; m < modes.size(); ++m) {
        const auto i = static_cast<std::size_t>(m);
        s += t.y1[i] * t.y1[i] / modes.pair(m).Lambda_h + t.y0[i] * t.y0[i];
    }
    return s;
}

DiscreteTarget data_transfer(const ContinuousData& data, const ModalBasis& modes, const SubspaceSpec& spec) {
    spec.validate();
    const GridParams& g = modes.grid();
    DiscreteTarget t;
    t.y0.assign(static_cast<std::size_t>(modes.size()), 0.0);
    t.y1.assign(static_cast<std::size_t>(modes.size()), 0.0);
    const int kmax = std::min(g.N, data.modes());
    for (int k = 1; k <= kmax; ++k) {
        const int idx = mode_index(g, Mode{Branch::Acoustic, k});
        const auto i = static_cast<std::size_t>(idx);
        t.y0[i] = data.coeff0(k);
        // y^{a,k,1}_h / lambda^{a,k}_h = y^{k,1} / lambda^k
        t.y1[i] = data.coeff1(k) * modes.pair(idx).lambda_h / (k * kPi);
    }
    return t;
}

std::vector<cplx> rhs_pairing(const ControlProblem& problem, const ConstrainedBasis& basis) {
    if (!problem.modes) throw ValidationError("control problem without a modal basis");
    const ModalBasis& modes = *problem.modes;
    const auto nm = static_cast<std::size_t>(modes.size());
    if (problem.target.y0.size() != nm || problem.target.y1.size() != nm)
        throw ValidationError("target size does not match the modal basis");
    if (basis.full_dim != 2 * modes.size()) throw ValidationError("constrained basis does not match the grid");

    std::vector<cplx> r(static_cast<std::size_t>(basis.dim()));
    for (std::size_t j = 0; j < r.size(); ++j) {
        cplx acc{};
        for (const auto& [q, l] : basis.columns[j]) {
            const std::size_t m = static_cast<std::size_t>(q) % nm;
            const double w = (static_cast<std::size_t>(q) < nm) ? modes.pair(static_cast<int>(m)).lambda_h
                                                               : -modes.pair(static_cast<int>(m)).lambda_h;
            const double y0 = problem.target.y0[m], y1 = problem.target.y1[m];
            if (y0 == 0.0 && y1 == 0.0) continue;
            // (Y1, U(0)) - (Y0, U_t(0)) for U = e^{i w (t-T)} phi_m is conj(.) of this
            const cplx rq = std::polar(1.0, w * problem.T) * cplx(y1, w * y0);
            acc += std::conj(l) * rq;
        }
        r[j] = acc;
    }
    return r;
}

ControlResult solve_hum(const ControlProblem& problem) {
    if (!problem.modes) throw ValidationError("control problem without a modal basis");
    if (!(problem.T > 0.0)) throw ValidationError("control horizon must be positive");
    const ModalBasis& modes = *problem.modes;
    ControlResult res;
    res.gram = gramian(modes, problem.spec, problem.T);
    const std::vector<cplx> r = rhs_pairing(problem, res.gram.basis);
    res.vprime_sq = vprime_norm_sq(problem.target, modes);

    std::vector<cplx> c;
    try {
        Cholesky<cplx> chol(res.gram.G);
        c = chol.solve(r);
    } catch (const NumericalError& e) {
        throw NumericalError(std::string("subspace not uniformly observable at this T (") + e.what() + ")");
    }
    res.coeffs = c;

    const std::vector<cplx> gc = matvec(res.gram.G, c);
    std::vector<cplx> diff(gc.size());
    for (std::size_t i = 0; i < gc.size(); ++i) diff[i] = gc[i] - r[i];
    const double rn = norm2(r);
    res.el_residual = rn > 0.0 ? norm2(diff) / rn : norm2(diff);

    cplx cr{}, cgc{};
    for (std::size_t i = 0; i < c.size(); ++i) {
        cr += std::conj(c[i]) * r[i];
        cgc += std::conj(c[i]) * gc[i];
    }
    res.pairing = cr.real();
    res.control_norm_sq = cgc.real();
    res.I_h = 0.5 * cgc.real() - cr.real();

    // u = L c in full coordinates; v(t) = sum_q u_q b_q e^{i w_q (t-T)}.
    res.full_coeffs.assign(static_cast<std::size_t>(res.gram.basis.full_dim), cplx{});
    for (std::size_t j = 0; j < c.size(); ++j)
        for (const auto& [q, l] : res.gram.basis.columns[j]) res.full_coeffs[static_cast<std::size_t>(q)] += l * c[j];
    for (std::size_t q = 0; q < res.full_coeffs.size(); ++q) {
        const double b = res.gram.trace[q];
        if (b == 0.0 || res.full_coeffs[q] == cplx{}) continue;
        const double w = res.gram.omega[q];
        res.control.amp.push_back(res.full_coeffs[q] * b * std::polar(1.0, -w * problem.T));
        res.control.omega.push_back(w);
    }
    return res;
}

double functional_J(const ControlResult& result, const std::vector<cplx>& c, const std::vector<cplx>& r) {
    if (c.size() != r.size() || c.size() != static_cast<std::size_t>(result.gram.dim()))
        throw ValidationError("functional_J: size mismatch");
    cplx cr{};
    for (std::size_t i = 0; i < c.size(); ++i) cr += std::conj(c[i]) * r[i];
    return 0.5 * quadratic_form(result.gram.G, c, c).real() - cr.real();
}

VerifyReport verify_control(const ControlResult& result, const ControlProblem& problem) {
    if (!problem.modes) throw ValidationError("control problem without a modal basis");
    const ModalBasis& modes = *problem.modes;
    const StatePair Y = target_vectors(problem.target, modes);
    const Trajectory tr = controlled_solve(Y.U, Y.Ut, result.control, problem.T, modes, SolveMethod::Duhamel, 1);
    const DiscreteTarget fin = target_from_vectors(tr.final_state.U, tr.final_state.Ut, modes);

    VerifyReport rep;
    rep.initial_norm = std::sqrt(vprime_norm_sq(problem.target, modes));
    // ||(Y_t(T), -Y(T))||_{V'}: Y_t(T) sits where Y1 sat.
    rep.final_norm = std::sqrt(vprime_norm_sq(DiscreteTarget{fin.y0, fin.y1}, modes));

    const auto nm = static_cast<std::size_t>(modes.size());
    const ConstrainedBasis& cb = result.gram.basis;
    for (std::size_t j = 0; j < static_cast<std::size_t>(cb.dim()); ++j) {
        cplx acc{};
        for (const auto& [q, l] : cb.columns[j]) {
            const std::size_t m = static_cast<std::size_t>(q) % nm;
            const double w = result.gram.omega[static_cast<std::size_t>(q)];
            // (Y_t(T), U^0) - (Y(T), U^1) with U^0 = phi_m, U^1 = i w phi_m
            acc += std::conj(l) * cplx(fin.y1[m], w * fin.y0[m]);
        }
        const double a = std::abs(acc);
        const double energy = result.gram.E(j, j).real();
        const double scale = rep.initial_norm * std::sqrt(2.0 * energy);
        rep.max_pairing = std::max(rep.max_pairing, a);
        if (scale > 0.0) rep.max_relative_pairing = std::max(rep.max_relative_pairing, a / scale);
    }
    return rep;
}

ContinuousRef continuous_hum_T2(const ContinuousData& data, int K) {
    if (K < 1) throw ValidationError("continuous_hum_T2: K must be positive");
    ContinuousRef ref;
    ref.K = K;
    ref.T = 2.0;
    const int kmax = std::min(K, data.modes());
    for (int k = 1; k <= kmax; ++k) {
        const double lam = k * kPi;
        const double y0 = data.coeff0(k), y1 = data.coeff1(k);
        if (y0 == 0.0 && y1 == 0.0) continue;
        for (int s : {-1, 1}) {
            const cplx a = signed_unit(k) / (2.0 * std::sqrt(2.0)) * cplx(y1 / lam, s * y0);
            ref.control.amp.push_back(a);
            ref.control.omega.push_back(s * lam);
            ref.norm_sq += 2.0 * std::norm(a);
        }
    }
    return ref;
}

ContinuousRef continuous_hum_galerkin(const ContinuousData& data, int K, double T, double tol) {
    if (K < 1) throw ValidationError("continuous_hum_galerkin: K must be positive");
    if (!(T >= 2.0)) throw ValidationError("continuous_hum_galerkin: T must be at least 2");
    ContinuousRef ref;
    ref.K = K;
    ref.T = T;

    // Unknowns ordered by signed index n = -K..-1, 1..K.
    const std::size_t n = static_cast<std::size_t>(2 * K);
    auto signed_index = [K](std::size_t p) {
        const int pi = static_cast<int>(p);
        return pi < K ? pi - K : pi - K + 1;
    };
    std::vector<cplx> rhs(n);
    std::vector<double> b(n);
    for (std::size_t p = 0; p < n; ++p) {
        const int sn = signed_index(p);
        const int k = std::abs(sn);
        const double w = sn * kPi;
        b[p] = std::sqrt(2.0) * k * kPi * signed_unit(k);
        rhs[p] = std::polar(1.0, w * T) * cplx(data.coeff1(k), w * data.coeff0(k)) / b[p];
    }
    const double rn = norm2(rhs);
    if (rn == 0.0) return ref;

    // A_pq = I(pi (n_p - n_q), T) is Toeplitz in the signed index.
    std::vector<cplx> toe(static_cast<std::size_t>(4 * K + 1));
    for (int d = -2 * K; d <= 2 * K; ++d) toe[static_cast<std::size_t>(d + 2 * K)] = exp_integral(d * kPi, T);
    std::vector<int> sidx(n);
    for (std::size_t p = 0; p < n; ++p) sidx[p] = signed_index(p);
    auto apply = [&](const std::vector<cplx>& x, std::vector<cplx>& y) {
        for (std::size_t p = 0; p < n; ++p) {
            cplx acc{};
            const cplx* row = toe.data() + (sidx[p] + 2 * K);
            for (std::size_t q = 0; q < n; ++q) acc += row[-sidx[q]] * x[q];
            y[p] = acc;
        }
    };

    std::vector<cplx> d(n, cplx{}), res = rhs, dir = rhs, ad(n);
    double rr = std::pow(norm2(res), 2);
    const int max_iter = static_cast<int>(std::min<std::size_t>(n, 4000));
    int it = 0;
    while (it < max_iter && std::sqrt(rr) > tol * rn) {
        apply(dir, ad);
        cplx pad{};
        for (std::size_t p = 0; p < n; ++p) pad += std::conj(dir[p]) * ad[p];
        const cplx alpha = rr / pad;
        for (std::size_t p = 0; p < n; ++p) {
            d[p] += alpha * dir[p];
            res[p] -= alpha * ad[p];
        }
        const double rr_new = std::pow(norm2(res), 2);
        const double beta = rr_new / rr;
        for (std::size_t p = 0; p < n; ++p) dir[p] = res[p] + beta * dir[p];
        rr = rr_new;
        ++it;
    }
    // True residual, not the recursively updated one.
    apply(d, ad);
    for (std::size_t p = 0; p < n; ++p) res[p] = rhs[p] - ad[p];
    ref.iterations = it;
    ref.residual = norm2(res) / rn;
    if (ref.residual > 1e-10)
        throw NumericalError("continuous Gramian ill-conditioned: CG residual " + std::to_string(ref.residual) +
                             " after " + std::to_string(it) + " iterations");

    cplx nsq{};
    for (std::size_t p = 0; p < n; ++p) {
        const double w = sidx[p] * kPi;
        ref.control.amp.push_back(d[p] * std::polar(1.0, -w * T));
        ref.control.omega.push_back(w);
        nsq += std::conj(d[p]) * ad[p];
    }
    ref.norm_sq = nsq.real();
    return ref;
}

double moment_residual(const ContinuousRef& ref, const ContinuousData& data) {
    double worst = 0.0, scale = 0.0;
    for (int k = 1; k <= ref.K; ++k) {
        const double lam = k * kPi;
        const double b = std::sqrt(2.0) * lam * signed_unit(k);
        for (int s : {-1, 1}) {
            const double w = s * lam;
            // int_0^T v e^{-i w t} dt = (y1 + i w y0) e^{i w T} e^{-i w T} / b
            const cplx expect = cplx(data.coeff1(k), w * data.coeff0(k)) / b;
            cplx got{};
            for (std::size_t j = 0; j < ref.control.size(); ++j)
                got += ref.control.amp[j] * exp_integral(ref.control.omega[j] - w, ref.T);
            worst = std::max(worst, std::abs(got - expect));
            scale = std::max(scale, std::abs(expect));
        }
    }
    return scale > 0.0 ? worst / scale : worst;
}

double l2_norm_sq(const ExpSum& a, double T) {
    if (a.amp.size() != a.omega.size()) throw ValidationError("malformed exponential sum");
    const ExpSum m = merged(a);
    double s = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j) {
        s += T * std::norm(m.amp[j]);
        cplx off{};
        for (std::size_t l = j + 1; l < m.size(); ++l) off += m.amp[l] * exp_integral(m.omega[l] - m.omega[j], T);
        s += 2.0 * (std::conj(m.amp[j]) * off).real();
    }
    return std::max(s, 0.0);
}

double l2_distance(const ExpSum& a, const ExpSum& b, double T) {
    ExpSum d = a;
    for (std::size_t j = 0; j < b.size(); ++j) {
        d.amp.push_back(-b.amp[j]);
        d.omega.push_back(b.omega[j]);
    }
    return std::sqrt(l2_norm_sq(d, T));
}

std::vector<double> sample(const ExpSum& v, const std::vector<double>& t) {
    std::vector<double> out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = v(t[i]).real();
    return out;
}

std::vector<StudyRow> convergence_study(const ContinuousData& data, const SubspaceSpec& spec, double T,
                                        const std::vector<int>& ladder, const ContinuousRef& ref, int threads) {
    spec.validate();
    if (!(T > minimal_time(spec))) throw ValidationError("convergence_study: T must exceed the minimal time");
    if (std::abs(ref.T - T) > 1e-14) throw ValidationError("convergence_study: reference horizon differs from T");
    std::vector<StudyRow> rows(ladder.size());
    parallel_for(
        ladder.size(),
        [&](std::size_t i) {
            const GridParams g = GridParams::make(ladder[i]);
            const ModalBasis modes(g);
            ControlProblem prob{&modes, T, spec, data_transfer(data, modes, spec)};
            const ControlResult res = solve_hum(prob);
            const VerifyReport ver = verify_control(res, prob);
            StudyRow row;
            row.N = g.N;
            row.h = g.h;
            row.L2_error = l2_distance(res.control, ref.control, T);
            row.control_norm = std::sqrt(std::max(res.control_norm_sq, 0.0));
            row.Ih = res.I_h;
            row.EL_residual = res.el_residual;
            row.proj_final_norm = ver.max_relative_pairing;
            rows[i] = row;
        },
        threads);
    return rows;
}

double fitted_slope(const std::vector<StudyRow>& rows) {
    if (rows.size() < 2) throw ValidationError("fitted_slope: need at least two rows");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : rows) {
        if (!(r.h > 0.0) || !(r.L2_error > 0.0)) throw ValidationError("fitted_slope: non-positive entry");
        const double x = std::log(r.h), y = std::log(r.L2_error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(rows.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace p2wave
