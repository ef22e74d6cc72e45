#include "p2wave/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "p2wave/errors.hpp"

namespace p2wave {

cplx exp_integral(double omega, double T) {
    const double x = omega * T;
    if (std::abs(x) < 1e-6) return {T - omega * omega * T * T * T / 6.0, omega * T * T / 2.0};
    // (e^{ix} - 1)/(i omega) = (sin x + i (1 - cos x)) / omega, with 1 - cos x = 2 sin^2(x/2).
    const double s = std::sin(0.5 * x);
    return {std::sin(x) / omega, 2.0 * s * s / omega};
}

ModalState ModalState::zero(const GridParams& g, double T) {
    ModalState s;
    s.T = T;
    s.plus.assign(static_cast<std::size_t>(g.dim()), cplx{});
    s.minus.assign(static_cast<std::size_t>(g.dim()), cplx{});
    return s;
}

namespace {

void check_state(const ModalState& s, const ModalBasis& basis) {
    if (static_cast<int>(s.plus.size()) != basis.size() ||
        static_cast<int>(s.minus.size()) != basis.size()) {
        throw ValidationError("modal state does not match the grid");
    }
}

// Projections (U, phi_m)_{h,0} for all m.
std::vector<double> project(const CoeffVector& U, const ModalBasis& basis) {
    check_size(U, basis.grid());
    const std::vector<double> mu = basis.ops().mass().apply(U);
    std::vector<double> c(static_cast<std::size_t>(basis.size()));
    for (int m = 0; m < basis.size(); ++m) c[static_cast<std::size_t>(m)] = dot(mu, basis.vector(m));
    return c;
}

CoeffVector synthesize(const std::vector<double>& c, const ModalBasis& basis) {
    CoeffVector u(static_cast<std::size_t>(basis.grid().dim()), 0.0);
    for (int m = 0; m < basis.size(); ++m) {
        const double cm = c[static_cast<std::size_t>(m)];
        if (cm == 0.0) continue;
        const CoeffVector& phi = basis.vector(m);
        for (std::size_t i = 0; i < u.size(); ++i) u[i] += cm * phi[i];
    }
    return u;
}

std::size_t node_n(const GridParams& g) { return static_cast<std::size_t>(node_index(g, g.N)); }

struct NewmarkOutput {
    std::vector<double> t, trace, energy;
    StatePair last;
};

// Average-acceleration Newmark on M u'' + S u = f(t) e_{node N}, signed step dt.
NewmarkOutput newmark_run(CoeffVector u, CoeffVector v, double t0, double dt, int steps,
                          const FemOperators& ops, const std::function<double(double)>& load) {
    const GridParams& g = ops.grid();
    const std::size_t n = static_cast<std::size_t>(g.dim());
    const std::size_t iN = node_n(g);
    const BandedLDLT mass_fact(ops.mass());
    const BandedLDLT eff(ops.mass().scaled_sum(1.0, ops.stiffness(), 0.25 * dt * dt));

    auto rhs_force = [&](double t, std::vector<double>& r) {
        if (load) r[iN] += load(t);
    };
    std::vector<double> r = ops.stiffness().apply(u);
    for (double& x : r) x = -x;
    rhs_force(t0, r);
    std::vector<double> a = mass_fact.solve(r);

    NewmarkOutput out;
    auto record = [&](double t) {
        out.t.push_back(t);
        out.trace.push_back(boundary_trace(u, g));
        out.energy.push_back(energy_direct(u, v, ops));
    };
    record(t0);
    std::vector<double> pred(n);
    for (int s = 1; s <= steps; ++s) {
        const double t = t0 + s * dt;
        for (std::size_t i = 0; i < n; ++i) pred[i] = u[i] + dt * v[i] + 0.25 * dt * dt * a[i];
        r = ops.stiffness().apply(pred);
        for (double& x : r) x = -x;
        rhs_force(t, r);
        const std::vector<double> a_new = eff.solve(r);
        for (std::size_t i = 0; i < n; ++i) {
            u[i] = pred[i] + 0.25 * dt * dt * a_new[i];
            v[i] += 0.5 * dt * (a[i] + a_new[i]);
        }
        a = a_new;
        record(t);
    }
    out.last = {u, v};
    return out;
}

int step_count(double dt, double T) {
    if (!(dt > 0.0)) throw ValidationError("time step must be positive");
    if (!(T > 0.0)) throw ValidationError("final time must be positive");
    return std::max(1, static_cast<int>(std::ceil(T / dt - 1e-9)));
}

}  // namespace

ModalState decompose(const CoeffVector& U0, const CoeffVector& U1, const ModalBasis& basis,
                     double T) {
    const std::vector<double> c0 = project(U0, basis);
    const std::vector<double> c1 = project(U1, basis);
    ModalState s = ModalState::zero(basis.grid(), T);
    for (int m = 0; m < basis.size(); ++m) {
        const auto i = static_cast<std::size_t>(m);
        const cplx q = c1[i] / cplx(0.0, basis.pair(m).lambda_h);
        s.plus[i] = 0.5 * (c0[i] + q);
        s.minus[i] = 0.5 * (c0[i] - q);
    }
    return s;
}

void modal_values(const ModalState& state, double t, const ModalBasis& basis, std::vector<cplx>& u,
                  std::vector<cplx>& ut) {
    check_state(state, basis);
    const std::size_t n = static_cast<std::size_t>(basis.size());
    u.assign(n, cplx{});
    ut.assign(n, cplx{});
    for (std::size_t m = 0; m < n; ++m) {
        const double lam = basis.pair(static_cast<int>(m)).lambda_h;
        const cplx e = std::polar(1.0, lam * (t - state.T));
        const cplx p = state.plus[m] * e;
        const cplx q = state.minus[m] * std::conj(e);
        u[m] = p + q;
        ut[m] = cplx(0.0, lam) * (p - q);
    }
}

StatePair reconstruct(const ModalState& state, double t, const ModalBasis& basis) {
    std::vector<cplx> u, ut;
    modal_values(state, t, basis, u, ut);
    std::vector<double> ur(u.size()), utr(u.size());
    for (std::size_t m = 0; m < u.size(); ++m) {
        ur[m] = u[m].real();
        utr[m] = ut[m].real();
    }
    return {synthesize(ur, basis), synthesize(utr, basis)};
}

double energy(const ModalState& state, const ModalBasis& basis) {
    check_state(state, basis);
    double e = 0.0;
    for (int m = 0; m < basis.size(); ++m) {
        const auto i = static_cast<std::size_t>(m);
        e += basis.pair(m).Lambda_h * (std::norm(state.plus[i]) + std::norm(state.minus[i]));
    }
    return e;
}

double energy_direct(const CoeffVector& U, const CoeffVector& Ut, const FemOperators& ops) {
    return 0.5 * (ops.inner(U, U, 1) + ops.inner(Ut, Ut, 0));
}

double boundary_trace(const CoeffVector& U, const GridParams& g) {
    check_size(U, g);
    return -U[node_n(g)] / g.h;
}

double boundary_trace(const ModalState& state, double t, const ModalBasis& basis) {
    check_state(state, basis);
    cplx s{};
    for (int m = 0; m < basis.size(); ++m) {
        const double b = basis.trace(m);
        if (b == 0.0) continue;
        const auto i = static_cast<std::size_t>(m);
        const cplx e = std::polar(1.0, basis.pair(m).lambda_h * (t - state.T));
        s += b * (state.plus[i] * e + state.minus[i] * std::conj(e));
    }
    return s.real();
}

Trajectory sample_adjoint(const ModalState& state, int steps, const ModalBasis& basis) {
    if (steps < 1) throw ValidationError("sample_adjoint: steps must be >= 1");
    Trajectory tr;
    const double e = energy(state, basis);
    for (int s = 0; s <= steps; ++s) {
        const double t = state.T * s / steps;
        tr.t.push_back(t);
        tr.trace.push_back(boundary_trace(state, t, basis));
        tr.energy.push_back(e);
    }
    tr.final_state = reconstruct(state, 0.0, basis);
    return tr;
}

Trajectory newmark_adjoint(const CoeffVector& U0, const CoeffVector& U1, double dt, double T,
                           const FemOperators& ops) {
    check_size(U0, ops.grid());
    check_size(U1, ops.grid());
    const int steps = step_count(dt, T);
    const double h = -T / steps;
    NewmarkOutput o = newmark_run(U0, U1, T, h, steps, ops, nullptr);
    Trajectory tr;
    tr.t.assign(o.t.rbegin(), o.t.rend());
    tr.t.front() = 0.0;
    tr.trace.assign(o.trace.rbegin(), o.trace.rend());
    tr.energy.assign(o.energy.rbegin(), o.energy.rend());
    tr.final_state = o.last;
    return tr;
}

cplx ExpSum::operator()(double t) const {
    cplx s{};
    for (std::size_t j = 0; j < amp.size(); ++j) s += amp[j] * std::polar(1.0, omega[j] * t);
    return s;
}

double SampledSignal::operator()(double t) const {
    if (values.empty() || !(dt > 0.0)) throw ValidationError("sampled signal is empty");
    const double x = t / dt;
    if (x <= 0.0) return values.front();
    const std::size_t i = static_cast<std::size_t>(std::floor(x));
    if (i + 1 >= values.size()) return values.back();
    const double f = x - static_cast<double>(i);
    return (1.0 - f) * values[i] + f * values[i + 1];
}

namespace {

Trajectory duhamel_expsum(const std::vector<double>& y0, const std::vector<double>& y1,
                          const ExpSum& v, double T, const ModalBasis& basis, int steps) {
    const GridParams& g = basis.grid();
    const std::size_t nm = static_cast<std::size_t>(basis.size());
    const std::size_t iN = node_n(g);
    Trajectory tr;
    std::vector<double> yr(nm), ypr(nm);
    for (int s = 0; s <= steps; ++s) {
        const double t = T * s / steps;
        double trace = 0.0, e = 0.0;
        for (std::size_t m = 0; m < nm; ++m) {
            const EigenPair& p = basis.pair(static_cast<int>(m));
            const double lam = p.lambda_h;
            const double c = std::cos(lam * t), sn = std::sin(lam * t);
            double y = y0[m] * c + y1[m] * sn / lam;
            double yp = -lam * y0[m] * sn + y1[m] * c;
            const double f = basis.vector(static_cast<int>(m))[iN] / g.h;
            if (f != 0.0 && v.size() > 0) {
                const cplx ep = std::polar(1.0, lam * t);
                cplx d{}, dp{};
                for (std::size_t j = 0; j < v.size(); ++j) {
                    const cplx lo = ep * exp_integral(v.omega[j] - lam, t);
                    const cplx hi = std::conj(ep) * exp_integral(v.omega[j] + lam, t);
                    d += v.amp[j] * (lo - hi);
                    dp += v.amp[j] * (lo + hi);
                }
                y += f * (d / cplx(0.0, 2.0 * lam)).real();
                yp += f * 0.5 * dp.real();
            }
            yr[m] = y;
            ypr[m] = yp;
            trace += basis.trace(static_cast<int>(m)) * y;
            e += 0.5 * (p.Lambda_h * y * y + yp * yp);
        }
        tr.t.push_back(t);
        tr.trace.push_back(trace);
        tr.energy.push_back(e);
    }
    tr.final_state = {synthesize(yr, basis), synthesize(ypr, basis)};
    return tr;
}

Trajectory duhamel_sampled(const std::vector<double>& y0, const std::vector<double>& y1,
                           const SampledSignal& v, double T, const ModalBasis& basis, int steps) {
    const GridParams& g = basis.grid();
    const std::size_t nm = static_cast<std::size_t>(basis.size());
    const std::size_t iN = node_n(g);
    const double dt = T / steps;
    std::vector<double> vs(static_cast<std::size_t>(steps) + 1);
    for (int s = 0; s <= steps; ++s) vs[static_cast<std::size_t>(s)] = v(s * dt);
    // Cumulative trapezoid sums of cos(lam tau) g(tau) and sin(lam tau) g(tau).
    std::vector<double> cacc(nm, 0.0), sacc(nm, 0.0), yr(nm), ypr(nm);
    Trajectory tr;
    for (int s = 0; s <= steps; ++s) {
        const double t = s * dt;
        double trace = 0.0, e = 0.0;
        for (std::size_t m = 0; m < nm; ++m) {
            const EigenPair& p = basis.pair(static_cast<int>(m));
            const double lam = p.lambda_h;
            const double f = basis.vector(static_cast<int>(m))[iN] / g.h;
            if (s > 0 && f != 0.0) {
                const double ta = t - dt;
                const double ga = f * vs[static_cast<std::size_t>(s - 1)], gb = f * vs[static_cast<std::size_t>(s)];
                cacc[m] += 0.5 * dt * (std::cos(lam * ta) * ga + std::cos(lam * t) * gb);
                sacc[m] += 0.5 * dt * (std::sin(lam * ta) * ga + std::sin(lam * t) * gb);
            }
            const double c = std::cos(lam * t), sn = std::sin(lam * t);
            const double y = y0[m] * c + y1[m] * sn / lam + (sn * cacc[m] - c * sacc[m]) / lam;
            const double yp = -lam * y0[m] * sn + y1[m] * c + c * cacc[m] + sn * sacc[m];
            yr[m] = y;
            ypr[m] = yp;
            trace += basis.trace(static_cast<int>(m)) * y;
            e += 0.5 * (p.Lambda_h * y * y + yp * yp);
        }
        tr.t.push_back(t);
        tr.trace.push_back(trace);
        tr.energy.push_back(e);
    }
    tr.final_state = {synthesize(yr, basis), synthesize(ypr, basis)};
    return tr;
}

}  // namespace

Trajectory controlled_solve(const CoeffVector& Y0, const CoeffVector& Y1, const ControlSignal& v,
                            double T, const ModalBasis& basis, SolveMethod method, int steps) {
    if (!(T > 0.0)) throw ValidationError("final time must be positive");
    if (steps < 1) throw ValidationError("controlled_solve: steps must be >= 1");
    const GridParams& g = basis.grid();
    check_size(Y0, g);
    check_size(Y1, g);
    if (method == SolveMethod::Newmark) {
        std::function<double(double)> load = [&](double t) {
            if (const auto* e = std::get_if<ExpSum>(&v)) return (*e)(t).real() / g.h;
            return std::get<SampledSignal>(v)(t) / g.h;
        };
        NewmarkOutput o = newmark_run(Y0, Y1, 0.0, T / steps, steps, basis.ops(), load);
        Trajectory tr{o.t, o.trace, o.energy, o.last};
        return tr;
    }
    const std::vector<double> y0 = project(Y0, basis);
    const std::vector<double> y1 = project(Y1, basis);
    if (const auto* e = std::get_if<ExpSum>(&v)) {
        if (e->amp.size() != e->omega.size()) throw ValidationError("malformed exponential sum");
        return duhamel_expsum(y0, y1, *e, T, basis, steps);
    }
    const auto& sampled = std::get<SampledSignal>(v);
    if (sampled.values.empty()) throw ValidationError("duhamel: empty sampled control");
    return duhamel_sampled(y0, y1, sampled, T, basis, steps);
}

}  // namespace p2wave
