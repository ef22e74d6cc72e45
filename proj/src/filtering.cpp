#include "p2wave/filtering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "p2wave/errors.hpp"

namespace p2wave {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt_num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// Minimum of f on [a, b]: dense sampling, then golden-section refinement
// around the best sample.
template <class F>
double minimize_on(F&& f, double a, double b) {
    if (b <= a) return f(a);
    constexpr int samples = 2001;
    int best = 0;
    double fbest = f(a);
    for (int i = 1; i < samples; ++i) {
        const double x = a + (b - a) * i / (samples - 1);
        const double fx = f(x);
        if (fx < fbest) {
            fbest = fx;
            best = i;
        }
    }
    const double step = (b - a) / (samples - 1);
    double lo = std::max(a, a + (best - 1) * step);
    double hi = std::min(b, a + (best + 1) * step);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 100 && hi - lo > 1e-14; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = f(x2);
        }
    }
    return std::min({fbest, f1, f2, f(a), f(b)});
}

}  // namespace

SubspaceSpec SubspaceSpec::truncation(double la_plus, double lo_minus, double lo_plus) {
    SubspaceSpec s;
    s.kind = SubspaceKind::Truncation;
    s.lambda_a_plus = la_plus;
    s.lambda_o_minus = lo_minus;
    s.lambda_o_plus = lo_plus;
    s.validate();
    return s;
}

SubspaceSpec SubspaceSpec::acoustic_truncation(double la_plus) {
    SubspaceSpec s = truncation(la_plus, 20.0, 50.0);
    s.with_optic = false;
    return s;
}

SubspaceSpec SubspaceSpec::bigrid_alpha(double alpha) {
    SubspaceSpec s;
    s.kind = SubspaceKind::BiGridAlpha;
    s.alpha = alpha;
    s.validate();
    return s;
}

void SubspaceSpec::validate() const {
    if (kind == SubspaceKind::Truncation) {
        if (!(lambda_a_plus > 0.0 && lambda_a_plus < 10.0))
            throw ValidationError("truncation: Lambda^a_+ must lie in (0, 10)");
        if (with_optic) {
            if (!(lambda_o_minus > 12.0 && lambda_o_plus < 60.0 + 1e-12 && lambda_o_minus <= lambda_o_plus))
                throw ValidationError("truncation: need 12 < Lambda^o_- <= Lambda^o_+ <= 60");
        }
    }
    if (kind == SubspaceKind::BiGridAlpha && !std::isfinite(alpha))
        throw ValidationError("bi-grid: alpha must be finite");
}

std::string SubspaceSpec::id() const {
    switch (kind) {
        case SubspaceKind::Full: return "full";
        case SubspaceKind::NonResonant: return "nonresonant";
        case SubspaceKind::Truncation:
            if (!with_optic) return "truncation(" + fmt_num(lambda_a_plus) + ")";
            return "truncation(" + fmt_num(lambda_a_plus) + ";" + fmt_num(lambda_o_minus) + ";" +
                   fmt_num(lambda_o_plus) + ")";
        case SubspaceKind::BiGrid: return "bigrid";
        case SubspaceKind::BiGridAlpha: return "bigrid-alpha(" + fmt_num(alpha) + ")";
    }
    return "?";
}

std::string to_string(SubspaceKind k) {
    switch (k) {
        case SubspaceKind::Full: return "full";
        case SubspaceKind::NonResonant: return "nonresonant";
        case SubspaceKind::Truncation: return "truncation";
        case SubspaceKind::BiGrid: return "bigrid";
        case SubspaceKind::BiGridAlpha: return "bigrid-alpha";
    }
    return "?";
}

SubspaceKind parse_subspace_kind(const std::string& s) {
    for (SubspaceKind k : {SubspaceKind::Full, SubspaceKind::NonResonant, SubspaceKind::Truncation,
                           SubspaceKind::BiGrid, SubspaceKind::BiGridAlpha}) {
        if (to_string(k) == s) return k;
    }
    throw ValidationError("unknown subspace kind '" + s + "'");
}

double invert_symbol(Branch b, double L) {
    double lo = 0.0, hi = kPi;
    if (b == Branch::Acoustic) {
        if (!(L >= 0.0 && L <= 10.0)) throw ValidationError("invert_symbol: acoustic Lambda outside [0,10]");
    } else if (b == Branch::Optic) {
        if (!(L >= 12.0 && L <= 60.0)) throw ValidationError("invert_symbol: optic Lambda outside [12,60]");
    } else {
        throw ValidationError("invert_symbol: the resonant mode has no wavenumber");
    }
    const bool increasing = (b == Branch::Acoustic);
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double v = symbol(b, mid);
        if ((v < L) == increasing) lo = mid;
        else hi = mid;
    }
    const double flo = std::abs(symbol(b, lo) - L), fhi = std::abs(symbol(b, hi) - L);
    return flo <= fhi ? lo : hi;
}

TruncationWindow truncation_window(const SubspaceSpec& spec) {
    if (spec.kind != SubspaceKind::Truncation) throw ValidationError("not a truncation spec");
    spec.validate();
    TruncationWindow w;
    w.eta_a_plus = invert_symbol(Branch::Acoustic, spec.lambda_a_plus);
    w.with_optic = spec.with_optic;
    if (spec.with_optic) {
        w.eta_o_plus = invert_symbol(Branch::Optic, spec.lambda_o_plus);
        w.eta_o_minus = invert_symbol(Branch::Optic, spec.lambda_o_minus);
    }
    return w;
}

std::vector<Mode> truncation_modes(const GridParams& g, const SubspaceSpec& spec) {
    const TruncationWindow w = truncation_window(spec);
    std::vector<Mode> modes;
    for (int k = 1; k <= g.N; ++k)
        if (k * kPi * g.h <= w.eta_a_plus) modes.push_back(Mode::acoustic(k));
    if (w.with_optic) {
        for (int k = 1; k <= g.N; ++k) {
            const double eta = k * kPi * g.h;
            if (eta >= w.eta_o_plus && eta <= w.eta_o_minus) modes.push_back(Mode::optic(k));
        }
    }
    return modes;
}

double minimal_group_velocity(const SubspaceSpec& spec) {
    if (spec.kind == SubspaceKind::BiGrid) return 1.0;
    if (spec.kind != SubspaceKind::Truncation)
        throw ValidationError("minimal time is defined for truncation and bi-grid classes");
    const TruncationWindow w = truncation_window(spec);
    double v = minimize_on([](double e) { return group_velocity(Branch::Acoustic, e); }, 0.0,
                           w.eta_a_plus);
    if (w.with_optic) {
        v = std::min(v, minimize_on([](double e) { return -group_velocity(Branch::Optic, e); },
                                    w.eta_o_plus, w.eta_o_minus));
    }
    return v;
}

double minimal_time(const SubspaceSpec& spec) {
    if (spec.kind == SubspaceKind::BiGrid) return 2.0;
    const double v = minimal_group_velocity(spec);
    if (!(v > 0.0)) return std::numeric_limits<double>::infinity();
    return 2.0 / v;
}

double ingham_gap(const SubspaceSpec& spec) { return kPi * minimal_group_velocity(spec); }

double measured_gap(const ModalBasis& basis, const SubspaceSpec& spec) {
    std::vector<double> freqs;
    for (const Mode& m : truncation_modes(basis.grid(), spec)) {
        const double l = basis.pair(basis.index(m)).lambda_h;
        freqs.push_back(l);
        freqs.push_back(-l);
    }
    std::sort(freqs.begin(), freqs.end());
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < freqs.size(); ++i) gap = std::min(gap, freqs[i] - freqs[i - 1]);
    return gap;
}

void require_odd(const GridParams& g) {
    if (g.N % 2 == 0) {
        throw ValidationError("bi-grid data need an odd number of interior nodes, got N = " +
                              std::to_string(g.N));
    }
}

CoeffVector make_bigrid_data(const std::vector<double>& coarse, const GridParams& g, double alpha) {
    require_odd(g);
    const int nc = (g.N - 1) / 2;
    if (static_cast<int>(coarse.size()) != nc) {
        throw ValidationError("bi-grid data: expected " + std::to_string(nc) + " coarse values");
    }
    std::vector<double> f(static_cast<std::size_t>(g.N) + 2, 0.0);  // nodal values x_0..x_{N+1}
    for (int j = 1; j <= nc; ++j) f[static_cast<std::size_t>(2 * j)] = coarse[static_cast<std::size_t>(j - 1)];
    for (int j = 1; j <= g.N; j += 2)
        f[static_cast<std::size_t>(j)] = 0.5 * (f[static_cast<std::size_t>(j - 1)] + f[static_cast<std::size_t>(j + 1)]);
    CoeffVector u(static_cast<std::size_t>(g.dim()), 0.0);
    for (int j = 1; j <= g.N; ++j) u[static_cast<std::size_t>(node_index(g, j))] = f[static_cast<std::size_t>(j)];
    for (int j = 0; j <= g.N; ++j)
        u[static_cast<std::size_t>(midpoint_index(g, j))] =
            alpha * (f[static_cast<std::size_t>(j)] + f[static_cast<std::size_t>(j + 1)]);
    return u;
}

double BigridReport::max() const {
    return std::max({resonant, mid_frequency, optic_acoustic, high_low, optic_acoustic_squared,
                     high_low_squared});
}

BigridReport verify_bigrid_constraints(const ModalState& state, const ModalBasis& basis) {
    const GridParams& g = basis.grid();
    require_odd(g);
    const int nm = basis.size();
    std::vector<cplx> s(static_cast<std::size_t>(nm)), d(static_cast<std::size_t>(nm));
    // Residuals are relative to the coefficient size of the whole state: the
    // decomposition carries an absolute error of order eps times that size, so
    // coefficients far below it cannot be resolved to a per-term relative accuracy.
    double scale_s = 0.0, scale_d = 0.0, scale_u = 0.0;
    for (int m = 0; m < nm; ++m) {
        const auto i = static_cast<std::size_t>(m);
        s[i] = state.plus[i] + state.minus[i];
        // lambda-weighted difference, proportional to the U^1 coefficient
        d[i] = basis.pair(m).lambda_h * (state.plus[i] - state.minus[i]);
        scale_s = std::max(scale_s, std::abs(s[i]));
        scale_d = std::max(scale_d, std::abs(d[i]));
        scale_u = std::max(scale_u, std::abs(state.plus[i] - state.minus[i]));
    }
    auto at = [&](const std::vector<cplx>& v, const Mode& m) {
        return v[static_cast<std::size_t>(basis.index(m))];
    };
    auto ratio = [](double num, double scale) { return scale > 0.0 ? num / scale : num; };

    BigridReport r;
    const int res = basis.resonant_index();
    r.resonant = std::max(ratio(std::abs(s[static_cast<std::size_t>(res)]), scale_s),
                          ratio(std::abs(d[static_cast<std::size_t>(res)]), scale_d));
    const Mode mid = Mode::acoustic((g.N + 1) / 2);
    r.mid_frequency = std::max(ratio(std::abs(at(s, mid)), scale_s), ratio(std::abs(at(d, mid)), scale_d));

    for (int k = 1; k <= (g.N - 1) / 2; ++k) {
        const Mode a = Mode::acoustic(k), o = Mode::optic(k), ah = Mode::acoustic(g.N + 1 - k);
        const EigenPair& pa = basis.pair(basis.index(a));
        const EigenPair& po = basis.pair(basis.index(o));
        const EigenPair& ph = basis.pair(basis.index(ah));
        const double c = std::cos(0.5 * k * kPi * g.h);
        const double ca = pa.m - pa.n * c, co = po.m - po.n * c;
        const double cmax = std::max(std::abs(ca), std::abs(co));
        // Linear optic/acoustic relations.
        r.optic_acoustic = std::max({r.optic_acoustic, ratio(std::abs(at(s, a) * ca + at(s, o) * co), cmax * scale_s),
                                     ratio(std::abs(at(d, a) * ca + at(d, o) * co), cmax * scale_d)});
        // Linear high/low relations.
        const double hl = -ph.n / pa.n * weight(Weight::W2, ph.Lambda) / weight(Weight::W2, pa.Lambda);
        const double hmax = std::max(1.0, std::abs(hl));
        r.high_low = std::max({r.high_low, ratio(std::abs(at(s, ah) - hl * at(s, a)), hmax * scale_s),
                               ratio(std::abs(at(d, ah) - hl * at(d, a)), hmax * scale_d)});
        // Squared forms with W1 and W3 on the unweighted differences.
        const double w1r = weight(Weight::W1, pa.Lambda) / weight(Weight::W1, po.Lambda);
        const double w3r = weight(Weight::W3, ph.Lambda) / weight(Weight::W3, pa.Lambda);
        const double sa2 = std::norm(at(s, a)), so2 = std::norm(at(s, o)), sh2 = std::norm(at(s, ah));
        const double da2 = std::norm(at(d, a)) / pa.Lambda_h, do2 = std::norm(at(d, o)) / po.Lambda_h,
                     dh2 = std::norm(at(d, ah)) / ph.Lambda_h;
        const double ss = scale_s * scale_s, uu = scale_u * scale_u;
        const double oa_d = pa.Lambda / po.Lambda * w1r, hl_d = pa.Lambda / ph.Lambda * w3r;
        r.optic_acoustic_squared =
            std::max({r.optic_acoustic_squared, ratio(std::abs(so2 - w1r * sa2), std::max(1.0, w1r) * ss),
                      ratio(std::abs(do2 - oa_d * da2), std::max(1.0, oa_d) * uu)});
        r.high_low_squared =
            std::max({r.high_low_squared, ratio(std::abs(sh2 - w3r * sa2), std::max(1.0, w3r) * ss),
                      ratio(std::abs(dh2 - hl_d * da2), std::max(1.0, hl_d) * uu)});
    }
    return r;
}

PsiEntry psi_basis(const ModalBasis& basis, int k) {
    const GridParams& g = basis.grid();
    require_odd(g);
    if (k < 1 || k > (g.N - 1) / 2) throw ValidationError("psi_basis: k must lie in 1..(N-1)/2");
    const int ia = basis.index(Mode::acoustic(k)), io = basis.index(Mode::optic(k));
    const int iah = basis.index(Mode::acoustic(g.N + 1 - k)), ioh = basis.index(Mode::optic(g.N + 1 - k));
    const double La = basis.pair(ia).Lambda, Lo = basis.pair(io).Lambda;
    const double Lah = basis.pair(iah).Lambda, Loh = basis.pair(ioh).Lambda;
    const double c_o = -weight(Weight::W4, La) / weight(Weight::W4, Lo);
    const double c_ah = -weight(Weight::W5, Lah) / weight(Weight::W5, La);
    const double c_oh = weight(Weight::W5, Lah) / weight(Weight::W5, La) * weight(Weight::W4, Lah) /
                        weight(Weight::W4, Loh);
    for (double c : {c_o, c_ah, c_oh})
        if (!std::isfinite(c)) throw SingularityError("psi_basis: non-finite expansion coefficient");
    PsiEntry p;
    p.k = k;
    p.terms = {{{ia, 1.0}, {io, c_o}, {iah, c_ah}, {ioh, c_oh}}};
    return p;
}

CoeffVector assemble_psi(const ModalBasis& basis, const PsiEntry& psi) {
    CoeffVector v(static_cast<std::size_t>(basis.grid().dim()), 0.0);
    for (const auto& [idx, c] : psi.terms) {
        const CoeffVector& phi = basis.vector(idx);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += c * phi[i];
    }
    return v;
}

ModalState ConstrainedBasis::state_of(const std::vector<cplx>& c, double T) const {
    if (static_cast<int>(c.size()) != dim()) throw ValidationError("coordinate vector size mismatch");
    const int nm = full_dim / 2;
    ModalState s;
    s.T = T;
    s.plus.assign(static_cast<std::size_t>(nm), cplx{});
    s.minus.assign(static_cast<std::size_t>(nm), cplx{});
    for (std::size_t j = 0; j < columns.size(); ++j) {
        for (const auto& [q, v] : columns[j]) {
            if (q < nm) s.plus[static_cast<std::size_t>(q)] += v * c[j];
            else s.minus[static_cast<std::size_t>(q - nm)] += v * c[j];
        }
    }
    return s;
}

namespace {

void add_mode_columns(ConstrainedBasis& cb, int idx, const std::string& label) {
    const int nm = cb.full_dim / 2;
    cb.columns.push_back({{idx, cplx{1.0}}});
    cb.labels.push_back(label + "+");
    cb.columns.push_back({{idx + nm, cplx{1.0}}});
    cb.labels.push_back(label + "-");
}

// Columns for data (U0, U1) given by their modal projections.
std::vector<std::pair<int, cplx>> data_column(const ModalBasis& basis, const std::vector<std::pair<int, cplx>>& c0,
                                              const std::vector<std::pair<int, cplx>>& c1) {
    const int nm = basis.size();
    std::vector<cplx> p(static_cast<std::size_t>(nm)), q(static_cast<std::size_t>(nm));
    for (const auto& [m, v] : c0) {
        p[static_cast<std::size_t>(m)] += 0.5 * v;
        q[static_cast<std::size_t>(m)] += 0.5 * v;
    }
    for (const auto& [m, v] : c1) {
        const cplx w = 0.5 * v / cplx(0.0, basis.pair(m).lambda_h);
        p[static_cast<std::size_t>(m)] += w;
        q[static_cast<std::size_t>(m)] -= w;
    }
    std::vector<std::pair<int, cplx>> col;
    for (int m = 0; m < nm; ++m) {
        if (p[static_cast<std::size_t>(m)] != cplx{}) col.emplace_back(m, p[static_cast<std::size_t>(m)]);
    }
    for (int m = 0; m < nm; ++m) {
        if (q[static_cast<std::size_t>(m)] != cplx{}) col.emplace_back(m + nm, q[static_cast<std::size_t>(m)]);
    }
    return col;
}

}  // namespace

ConstrainedBasis constrained_basis(const ModalBasis& basis, const SubspaceSpec& spec) {
    spec.validate();
    const GridParams& g = basis.grid();
    ConstrainedBasis cb;
    cb.full_dim = 2 * basis.size();
    switch (spec.kind) {
        case SubspaceKind::Full:
        case SubspaceKind::NonResonant:
            for (int m = 0; m < basis.size(); ++m) {
                if (spec.kind == SubspaceKind::NonResonant && m == basis.resonant_index()) continue;
                add_mode_columns(cb, m, mode_at(g, m).label());
            }
            break;
        case SubspaceKind::Truncation:
            for (const Mode& m : truncation_modes(g, spec)) add_mode_columns(cb, basis.index(m), m.label());
            break;
        case SubspaceKind::BiGrid: {
            require_odd(g);
            for (int k = 1; k <= (g.N - 1) / 2; ++k) {
                const PsiEntry psi = psi_basis(basis, k);
                const double la = basis.pair(basis.index(Mode::acoustic(k))).lambda_h;
                for (int s : {1, -1}) {
                    std::vector<std::pair<int, cplx>> c0, c1;
                    for (const auto& [m, c] : psi.terms) {
                        c0.emplace_back(m, c * double(s) / cplx(0.0, la));
                        c1.emplace_back(m, cplx(c));
                    }
                    cb.columns.push_back(data_column(basis, c0, c1));
                    cb.labels.push_back("psi" + std::to_string(k) + (s > 0 ? "+" : "-"));
                }
            }
            break;
        }
        case SubspaceKind::BiGridAlpha: {
            require_odd(g);
            const int nc = (g.N - 1) / 2;
            const std::vector<double> zero(static_cast<std::size_t>(nc), 0.0);
            for (int part = 0; part < 2; ++part) {
                for (int j = 1; j <= nc; ++j) {
                    std::vector<double> e = zero;
                    e[static_cast<std::size_t>(j - 1)] = 1.0;
                    const CoeffVector u = make_bigrid_data(e, g, spec.alpha);
                    const std::vector<double> mu = basis.ops().mass().apply(u);
                    std::vector<std::pair<int, cplx>> proj;
                    for (int m = 0; m < basis.size(); ++m) {
                        const double c = dot(mu, basis.vector(m));
                        if (c != 0.0) proj.emplace_back(m, cplx(c));
                    }
                    cb.columns.push_back(part == 0 ? data_column(basis, proj, {}) : data_column(basis, {}, proj));
                    cb.labels.push_back(std::string(part == 0 ? "u0_" : "u1_") + std::to_string(2 * j));
                }
            }
            break;
        }
    }
    if (cb.columns.empty()) throw ValidationError("subspace " + spec.id() + " is empty on this grid");
    return cb;
}

ModalState project_acoustic(const ModalState& state, double delta, const GridParams& g) {
    if (!(delta > 0.0 && delta <= 1.0)) throw ValidationError("project_acoustic: delta must lie in (0, 1]");
    const int kmax = std::min(g.N, static_cast<int>(std::floor(delta * (g.N + 1) + 1e-12)));
    ModalState out = ModalState::zero(g, state.T);
    for (int k = 1; k <= kmax; ++k) {
        const auto i = static_cast<std::size_t>(mode_index(g, Mode::acoustic(k)));
        out.plus[i] = state.plus[i];
        out.minus[i] = state.minus[i];
    }
    return out;
}

EnergyRatio energy_ratio_bigrid(const GridParams& g, double alpha) {
    require_odd(g);
    EnergyRatio r;
    auto w1 = [alpha](double L) { return weight_alpha(alpha, L); };
    for (int k = 1; k <= (g.N - 1) / 2; ++k) {
        const double La = symbol(Branch::Acoustic, k * kPi * g.h);
        const double Lo = symbol(Branch::Optic, k * kPi * g.h);
        const double Lah = symbol(Branch::Acoustic, (g.N + 1 - k) * kPi * g.h);
        const double Loh = symbol(Branch::Optic, (g.N + 1 - k) * kPi * g.h);
        const double w3r = weight(Weight::W3, Lah) / weight(Weight::W3, La);
        const double lo_p = 1.0 + Lo / La * w1(La) / w1(Lo);
        const double lo_m = 1.0 + w1(La) / w1(Lo);
        const double hi_m = (1.0 + w1(Lah) / w1(Loh)) * w3r;
        const double hi_p = Lah / La * (1.0 + Loh / Lah * w1(Lah) / w1(Loh)) * w3r;
        r.lo_plus.push_back(lo_p);
        r.lo_minus.push_back(lo_m);
        r.hi_plus.push_back(hi_p);
        r.hi_minus.push_back(hi_m);
        r.max_coefficient = std::max({r.max_coefficient, lo_p, lo_m, hi_p, hi_m});
        r.max_sum = std::max({r.max_sum, lo_p + hi_p, lo_m + hi_m});
        r.max_lo_plus = std::max(r.max_lo_plus, lo_p);
    }
    return r;
}

double bigrid_energy_constrained(const ModalState& state, const ModalBasis& basis) {
    const GridParams& g = basis.grid();
    const EnergyRatio w = energy_ratio_bigrid(g);
    double e = 0.0;
    for (int k = 1; k <= (g.N - 1) / 2; ++k) {
        const int ia = basis.index(Mode::acoustic(k));
        const auto i = static_cast<std::size_t>(ia);
        const auto kk = static_cast<std::size_t>(k - 1);
        e += basis.pair(ia).Lambda_h * ((w.lo_plus[kk] + w.hi_plus[kk]) * std::norm(state.plus[i] + state.minus[i]) +
                                        (w.lo_minus[kk] + w.hi_minus[kk]) * std::norm(state.plus[i] - state.minus[i]));
    }
    return 0.5 * e;
}

double linear_energy_fourier(const ModalState& state, const ModalBasis& basis) {
    const GridParams& g = basis.grid();
    double e = 0.0;
    for (int k = 1; k <= g.N; ++k) {
        const int ia = basis.index(Mode::acoustic(k));
        const auto i = static_cast<std::size_t>(ia);
        const double La = basis.pair(ia).Lambda, Lo = basis.pair(basis.index(Mode::optic(k))).Lambda;
        const double w1r = weight(Weight::W1, La) / weight(Weight::W1, Lo);
        e += basis.pair(ia).Lambda_h * ((1.0 + Lo / La * w1r) * std::norm(state.plus[i] + state.minus[i]) +
                                        (1.0 + w1r) * std::norm(state.plus[i] - state.minus[i]));
    }
    return 0.5 * e;
}

double linear_energy_nodal(const CoeffVector& U0, const CoeffVector& U1, const GridParams& g) {
    check_size(U0, g);
    check_size(U1, g);
    double a = 0.0, b = 0.0;
    for (int j = 0; j <= g.N; ++j) {
        const double d = (node_value(U0, g, j + 1) - node_value(U0, g, j)) / g.h;
        a += d * d;
        const double uj = node_value(U1, g, j), un = node_value(U1, g, j + 1);
        b += 2.0 * uj * uj + (un + uj) * (un + uj);
    }
    return 0.5 * g.h * a + g.h / 12.0 * b;
}

}  // namespace p2wave
