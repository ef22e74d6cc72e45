// Acceptance gate: one PASS/FAIL line per criterion.
//   p2wave_acceptance [--criterion NAME] [--list]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <functional>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "p2wave/hum_control.hpp"
#include "p2wave/identities.hpp"
#include "p2wave/thread_pool.hpp"

using namespace p2wave;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

class Detail {
public:
    template <class T>
    Detail& operator()(const std::string& key, const T& v) {
        if (!first_) os_ << ", ";
        first_ = false;
        os_ << key << '=' << v;
        return *this;
    }
    std::string str() const { return os_.str(); }

private:
    std::ostringstream os_;
    bool first_ = true;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

Outcome spectral_limits() {
    const double errs[4] = {std::abs(symbol(Branch::Acoustic, pi) - 10.0), std::abs(symbol(Branch::Optic, pi) - 12.0),
                            std::abs(symbol(Branch::Optic, 0.0) - 60.0),
                            std::abs(eigenpair(GridParams::make(19), Mode::resonant()).Lambda - 10.0)};
    double worst = 0.0;
    for (double e : errs) worst = std::max(worst, e);
    return {worst <= 1e-12, Detail()("max_abs_error", sci(worst))("tol", "1e-12").str()};
}

Outcome brute_force() {
    const auto t0 = std::chrono::steady_clock::now();
    const GridParams g = GridParams::make(9);
    const DenseSpectrum d = brute_force_spectrum(g);
    const double secs = seconds_since(t0);
    std::vector<double> closed;
    for (int k = 1; k <= g.N; ++k) {
        closed.push_back(eigenpair(g, Mode::acoustic(k)).Lambda_h);
        closed.push_back(eigenpair(g, Mode::optic(k)).Lambda_h);
    }
    closed.push_back(10.0 / (g.h * g.h));
    std::sort(closed.begin(), closed.end());
    double worst = d.Lambda_h.size() == closed.size() ? 0.0 : INFINITY;
    for (std::size_t i = 0; i < std::min(closed.size(), d.Lambda_h.size()); ++i)
        worst = std::max(worst, std::abs(d.Lambda_h[i] - closed[i]) / closed[i]);
    return {worst <= 1e-8 && secs < 1.0,
            Detail()("eigenvalues", d.Lambda_h.size())("max_rel_error", sci(worst))("tol", "1e-8")("seconds", secs).str()};
}

Outcome observability_identities() {
    double obs = 0.0, res = 0.0;
    for (int N : {9, 31, 99, 199}) {
        const ModalBasis b(GridParams::make(N));
        obs = std::max(obs, observability_identity_residual(b));
        res = std::max(res, resonant_identity_residual(b));
    }
    return {obs <= 1e-9 && res <= 1e-12,
            Detail()("identity_rel", sci(obs))("tol", "1e-9")("resonant_rel", sci(res))("tol_r", "1e-12").str()};
}

Outcome norm_representation() {
    double worst = 0.0;
    for (int N : {9, 31, 99})
        for (int order : {0, 1}) worst = std::max(worst, norm_representation_residual(GridParams::make(N), 1, 100, order));
    return {worst <= 1e-12, Detail()("max_rel", sci(worst))("samples_per_N", 100)("tol", "1e-12").str()};
}

Outcome bigrid_constraints() {
    double worst = 0.0;
    for (int N : {9, 19, 39}) worst = std::max(worst, bigrid_constraint_residual(ModalBasis(GridParams::make(N)), 1, 100));
    return {worst <= 1e-9, Detail()("max_rel", sci(worst))("samples_per_N", 100)("tol", "1e-9").str()};
}

Outcome energy_bound() {
    const std::vector<int> ladder{9, 19, 39, 79, 159};
    double lo = INFINITY, hi = 0.0, a_first = 0.0, a_last = 0.0;
    for (int N : ladder) {
        const GridParams g = GridParams::make(N);
        const double c = energy_ratio_bigrid(g).max_coefficient;
        lo = std::min(lo, c);
        hi = std::max(hi, c);
        const double a = energy_ratio_bigrid(g, 0.0).max_lo_plus;
        if (N == ladder.front()) a_first = a;
        a_last = a;
    }
    const double spread = hi / lo, growth = a_last / a_first;
    return {spread <= 1.5 && growth >= 2.0,
            Detail()("max_coeff_range", std::to_string(lo) + ".." + std::to_string(hi))("spread", spread)(
                "spread_tol", 1.5)("alpha0_growth", growth)("growth_min", 2.0)
                .str()};
}

// Observability sweep shared by the trend and admissibility criteria.
struct SweepRow {
    int N;
    std::string spec;
    double T, C_h, inv_c_h, bound;
};

const std::vector<SweepRow>& sweep(double* seconds = nullptr) {
    static std::vector<SweepRow> rows;
    static double secs = 0.0;
    static std::once_flag once;
    std::call_once(once, [] {
        const auto t0 = std::chrono::steady_clock::now();
        const std::vector<int> ladder{19, 39, 79, 159};
        const SubspaceSpec trunc = SubspaceSpec::truncation(5.0, 20.0, 50.0);
        const std::vector<std::pair<SubspaceSpec, double>> specs{{SubspaceSpec::full(), 4.0},
                                                                 {SubspaceSpec::nonresonant(), 4.0},
                                                                 {trunc, 1.2 * minimal_time(trunc)},
                                                                 {SubspaceSpec::bigrid(), 2.5}};
        rows.resize(ladder.size() * specs.size());
        parallel_for(rows.size(), [&](std::size_t i) {
            const int N = ladder[i / specs.size()];
            const auto& [spec, T] = specs[i % specs.size()];
            const ModalBasis b(GridParams::make(N));
            const ObsReport r = observability_report(b, spec, T);
            rows[i] = {N, spec.id(), T, r.C_h, r.inv_c_h, 2.0 * T * matrix_norm_bound(b.grid()).combined};
        });
        secs = seconds_since(t0);
    });
    if (seconds) *seconds = secs;
    return rows;
}

std::vector<double> column(const std::vector<SweepRow>& rows, const std::string& prefix) {
    std::vector<double> c;
    for (const auto& r : rows)
        if (r.spec.rfind(prefix, 0) == 0) c.push_back(r.C_h);
    return c;
}

double spread(const std::vector<double>& v) {
    const auto [a, b] = std::minmax_element(v.begin(), v.end());
    return *b / *a;
}

Outcome observability_trends() {
    double secs = 0.0;
    const auto& rows = sweep(&secs);
    bool full_inf = true;
    for (const double c : column(rows, "full")) full_inf = full_inf && std::isinf(c);
    const auto nr = column(rows, "nonresonant");
    bool increasing = true;
    for (std::size_t i = 1; i < nr.size(); ++i) increasing = increasing && nr[i] > nr[i - 1];
    const double st = spread(column(rows, "truncation")), sb = spread(column(rows, "bigrid"));
    return {full_inf && increasing && st <= 4.0 && sb <= 4.0 && secs < 120.0,
            Detail()("full_inf", full_inf)("nonres_C_h", sci(nr.front()) + ".." + sci(nr.back()))(
                "nonres_increasing", increasing)("trunc_spread", st)("bigrid_spread", sb)("tol", 4)("seconds",
                                                                                                    secs)
                .str()};
}

Outcome admissibility() {
    const auto& rows = sweep();
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, r.inv_c_h / r.bound);
    return {worst <= 1.0, Detail()("rows", rows.size())("max_ratio_to_bound", worst).str()};
}

double simpson_trace_sq(const ModalState& s, const ModalBasis& b, double T, int n) {
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double t = T * i / n;
        cplx tr{};
        for (int m = 0; m < b.size(); ++m) {
            const double w = b.pair(m).lambda_h * (t - s.T);
            const auto k = static_cast<std::size_t>(m);
            tr += b.trace(m) * (s.plus[k] * std::polar(1.0, w) + s.minus[k] * std::polar(1.0, -w));
        }
        acc += ((i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0)) * std::norm(tr);
    }
    return acc * T / (3.0 * n);
}

Outcome gramian_quadrature() {
    const ModalBasis b(GridParams::make(19));
    const double T = 2.5;
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd;
    double worst = 0.0;
    for (const SubspaceSpec& spec : {SubspaceSpec::nonresonant(), SubspaceSpec::truncation(5.0, 20.0, 50.0),
                                     SubspaceSpec::bigrid(), SubspaceSpec::bigrid_alpha(0.5)}) {
        const Gramian g = gramian(b, spec, T);
        for (int s = 0; s < 50; ++s) {
            std::vector<cplx> c(static_cast<std::size_t>(g.dim()));
            for (auto& x : c) x = cplx(nd(rng), nd(rng));
            const double q = simpson_trace_sq(g.basis.state_of(c, T), b, T, 8000);
            worst = std::max(worst, std::abs(quadratic_form(g.G, c, c).real() - q) / q);
        }
    }
    return {worst <= 1e-6, Detail()("states_per_spec", 50)("max_rel", sci(worst))("tol", "1e-6").str()};
}

Outcome hum_end_to_end() {
    const ModalBasis b(GridParams::make(19));
    const SubspaceSpec spec = SubspaceSpec::bigrid();
    const double T = 2.5;
    const ControlProblem p{&b, T, spec, data_transfer(named_data("mode1"), b, spec)};
    const ControlResult r = solve_hum(p);
    const VerifyReport v = verify_control(r, p);
    const double l2 = l2_norm_sq(r.control, T);
    const double duality = std::abs(l2 - r.pairing) / l2;
    const double C = observability_constant(b, spec, T);
    const bool bound = l2 <= C * r.vprime_sq;
    return {r.el_residual <= 1e-10 && v.max_relative_pairing <= 1e-8 && duality <= 1e-9 && bound,
            Detail()("el", sci(r.el_residual))("pairing_rel", sci(v.max_relative_pairing))("duality_rel", sci(duality))(
                "norm_sq", l2)("bound", C * r.vprime_sq)
                .str()};
}

Outcome control_convergence() {
    const auto t0 = std::chrono::steady_clock::now();
    const ContinuousData data = named_data("sin");
    const double T = 2.5;
    const ContinuousRef ref = continuous_hum_galerkin(data, 2048, T);
    const ContinuousRef fine = continuous_hum_galerkin(data, 4096, T);
    const double self = l2_distance(ref.control, fine.control, T) / std::sqrt(fine.norm_sq);
    const std::vector<int> ladder{19, 39, 79, 159};
    bool decreasing = true;
    std::ostringstream errs;
    double slope = 0.0;
    for (const SubspaceSpec& spec : {SubspaceSpec::bigrid(), SubspaceSpec::truncation(5.0, 20.0, 50.0)}) {
        const auto rows = convergence_study(data, spec, T, ladder, ref);
        errs << to_string(spec.kind) << '[';
        for (std::size_t i = 0; i < rows.size(); ++i) {
            errs << (i ? " " : "") << rows[i].L2_error;
            if (i > 0) decreasing = decreasing && rows[i].L2_error < rows[i - 1].L2_error;
        }
        errs << "] ";
        if (spec.kind == SubspaceKind::BiGrid) slope = fitted_slope(rows);
    }
    const double secs = seconds_since(t0);
    return {decreasing && self <= 1e-6 && slope >= 0.5 && secs < 300.0,
            Detail()("errors", errs.str())("strictly_decreasing", decreasing)("ref_self_convergence", sci(self))(
                "self_tol", "1e-6")("bigrid_slope", slope)("slope_min", 0.5)("seconds", secs)
                .str()};
}

Outcome t2_oracle() {
    double worst = 0.0;
    for (const std::string& d : {"sin", "parabola", "sin-velocity"}) {
        const ContinuousData data = named_data(d);
        const ContinuousRef a = continuous_hum_T2(data, 2048);
        const ContinuousRef g = continuous_hum_galerkin(data, 2048, 2.0);
        worst = std::max(worst, l2_distance(a.control, g.control, 2.0));
    }
    return {worst <= 1e-8, Detail()("max_l2_distance", sci(worst))("tol", "1e-8").str()};
}

struct Criterion {
    const char* name;
    Outcome (*run)();
};

const Criterion kCriteria[] = {
    {"spectral_limits", spectral_limits},
    {"brute_force_spectrum", brute_force},
    {"observability_identities", observability_identities},
    {"norm_representation", norm_representation},
    {"bigrid_constraints", bigrid_constraints},
    {"energy_bound", energy_bound},
    {"observability_trends", observability_trends},
    {"admissibility", admissibility},
    {"gramian_quadrature", gramian_quadrature},
    {"hum_end_to_end", hum_end_to_end},
    {"control_convergence", control_convergence},
    {"t2_oracle", t2_oracle},
};

}  // namespace

int main(int argc, char** argv) {
    std::string only;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--list")) {
            for (const auto& c : kCriteria) std::printf("%s\n", c.name);
            return 0;
        }
        if (!std::strcmp(argv[i], "--criterion") && i + 1 < argc) {
            only = argv[++i];
            continue;
        }
        std::fprintf(stderr, "usage: %s [--criterion NAME] [--list]\n", argv[0]);
        return 2;
    }
    int failures = 0, ran = 0;
    for (const auto& c : kCriteria) {
        if (!only.empty() && only != c.name) continue;
        ++ran;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
        std::fflush(stdout);
        failures += !o.pass;
    }
    if (ran == 0) {
        std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
        return 2;
    }
    return failures == 0 ? 0 : 1;
}
