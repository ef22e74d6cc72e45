#include "p2wave/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "p2wave/errors.hpp"
#include "p2wave/hum_control.hpp"
#include "p2wave/identities.hpp"
#include "p2wave/thread_pool.hpp"

namespace p2wave::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kVersion = "1.0.0";

// Raised when a run completes but one of its checks exceeds its tolerance.
struct ToleranceBreach : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Csv {
public:
    explicit Csv(std::vector<std::string> header) : width_(header.size()) { add(header); }

    template <class... Cells>
    void row(const Cells&... cells) {
        std::vector<std::string> r{cell(cells)...};
        if (r.size() != width_) throw std::logic_error("csv row width mismatch");
        add(r);
    }

    std::string str() const { return out_.str(); }

private:
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    static std::string cell(double x) { return format_double(x); }
    static std::string cell(int x) { return std::to_string(x); }

    void add(const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) out_ << (i ? "," : "") << r[i];
        out_ << '\n';
    }

    std::size_t width_;
    std::ostringstream out_;
};

std::string path_in(const RunConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.out) / name).string();
}

json number(double x) {
    if (std::isfinite(x)) return x;
    return format_double(x);  // JSON has no inf or nan
}

void write_summary(const RunConfig& cfg, const json& j) { write_atomic(path_in(cfg, "summary.json"), j.dump(2) + "\n"); }

ContinuousData load_data(const std::string& sel) {
    const bool is_file = sel.size() > 5 && sel.substr(sel.size() - 5) == ".json";
    if (!is_file) return named_data(sel);
    std::ifstream in(sel);
    if (!in) throw ValidationError("cannot open data file '" + sel + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError("data file '" + sel + "' is not valid JSON: " + e.what());
    }
    ContinuousData d;
    d.name = sel;
    try {
        if (j.contains("y0")) d.y0 = j.at("y0").get<std::vector<double>>();
        if (j.contains("y1")) d.y1 = j.at("y1").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw ValidationError("data file '" + sel + "': y0 and y1 must be arrays of numbers");
    }
    for (double x : d.y0)
        if (!std::isfinite(x)) throw ValidationError("data file '" + sel + "' holds a non-finite coefficient");
    for (double x : d.y1)
        if (!std::isfinite(x)) throw ValidationError("data file '" + sel + "' holds a non-finite coefficient");
    return d;
}

std::vector<std::string> split_specs(const std::string& s) {
    if (s == "all") return {"full", "nonresonant", "truncation", "bigrid"};
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

// --- commands -----------------------------------------------------------

void cmd_spectrum(const RunConfig& cfg) {
    Csv disp({"eta", "Lambda_a", "Lambda_o", "lambda_a", "lambda_o", "vg_a", "vg_o"});
    for (const auto& r : dispersion_curve(std::max(cfg.fine_grid, 2)))
        disp.row(r.eta, r.Lambda_a, r.Lambda_o, r.lambda_a, r.lambda_o, r.vg_a, r.vg_o);
    write_atomic(path_in(cfg, "dispersion.csv"), disp.str());

    const ModalBasis modes(GridParams::make(cfg.n));
    const FemOperators& ops = modes.ops();
    Csv eig({"mode", "Lambda", "residual", "norm_h0", "norm_h1_over_Lambda_h"});
    double worst = 0.0;
    for (int m = 0; m < modes.size(); ++m) {
        const CoeffVector& phi = modes.vector(m);
        const EigenPair& p = modes.pair(m);
        const auto s = ops.stiffness().apply(phi);
        const auto mm = ops.mass().apply(phi);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < phi.size(); ++i) {
            num += std::pow(s[i] - p.Lambda_h * mm[i], 2);
            den += std::pow(p.Lambda_h * mm[i], 2);
        }
        const double res = std::sqrt(num / den);
        worst = std::max(worst, res);
        eig.row(p.mode.label(), p.Lambda, res, ops.norm(phi, 0), ops.inner(phi, phi, 1) / p.Lambda_h);
    }
    write_atomic(path_in(cfg, "eigen_check.csv"), eig.str());
    write_summary(cfg, json{{"modes", modes.size()}, {"max_residual", worst}});
    if (worst > 1e-10) throw ToleranceBreach("eigen residual " + format_double(worst) + " exceeds 1e-10");
}

void cmd_identities(const RunConfig& cfg) {
    IdentityConfig ic;
    ic.ladder = ladder_or(cfg, ic.ladder);
    ic.spec = make_spec(cfg, cfg.spec);
    ic.seed = cfg.seed;
    const auto rows = identity_suite(ic);
    Csv csv({"identity", "N", "residual", "tolerance", "status"});
    for (const auto& r : rows) csv.row(r.identity, r.N, r.residual, r.tolerance, r.status);
    write_atomic(path_in(cfg, "identities.csv"), csv.str());
    json flagged = json::array();
    for (const auto& r : rows)
        if (r.status == "fail" || r.status == "unbounded") flagged.push_back(r.identity + "@" + std::to_string(r.N));
    write_summary(cfg, json{{"rows", rows.size()}, {"all_pass", all_pass(rows)}, {"flagged", flagged}});
    if (!all_pass(rows)) throw ToleranceBreach("identity suite: at least one residual exceeds its tolerance");
}

void cmd_observability(const RunConfig& cfg) {
    struct Point {
        SubspaceSpec spec;
        int N;
        double T;
    };
    std::vector<Point> points;
    for (const auto& name : split_specs(cfg.spec)) {
        const SubspaceSpec s = make_spec(cfg, name);
        const double T = horizon(cfg, s);
        for (int N : ladder_or(cfg, {19, 39, 79, 159})) points.push_back({s, N, T});
    }
    std::vector<ObsReport> reps(points.size());
    std::vector<double> bounds(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        const GridParams g = GridParams::make(points[i].N);
        const ModalBasis modes(g);
        reps[i] = observability_report(modes, points[i].spec, points[i].T);
        bounds[i] = 2.0 * points[i].T * matrix_norm_bound(g).combined;
    });

    Csv csv({"N", "h", "T", "spec", "C_h", "inv_c_h", "gap", "dim", "observable"});
    json rows = json::array();
    bool admissible = true;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& r = reps[i];
        const GridParams g = GridParams::make(points[i].N);
        csv.row(g.N, g.h, r.T, r.spec, r.C_h, r.inv_c_h, r.gap, r.dim, r.observable ? 1 : 0);
        if (r.inv_c_h > bounds[i]) admissible = false;
        json row{{"N", g.N}, {"spec", r.spec}, {"admissibility_bound", bounds[i]}};
        if (!r.diagnostic.empty()) row["diagnostic"] = r.diagnostic;
        rows.push_back(row);
    }
    write_atomic(path_in(cfg, "obs_sweep.csv"), csv.str());
    write_summary(cfg, json{{"rows", rows}, {"admissibility_holds", admissible}});
    if (!admissible) throw ToleranceBreach("admissibility bound 2T max{max W, 3/16} violated");
}

void cmd_control(const RunConfig& cfg) {
    const SubspaceSpec spec = make_spec(cfg, cfg.spec);
    const double T = horizon(cfg, spec);
    const ModalBasis modes(GridParams::make(cfg.n));
    const ContinuousData data = load_data(cfg.data);
    ControlProblem prob{&modes, T, spec, data_transfer(data, modes, spec)};
    const ControlResult res = solve_hum(prob);
    const VerifyReport ver = verify_control(res, prob);
    const double C_h = observability_constant(modes, spec, T);

    const int n = cfg.fine_grid;
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = (i == n - 1) ? T : T * i / (n - 1);
    const auto v = sample(res.control, t);
    Csv ctl({"t", "v_h"});
    for (std::size_t i = 0; i < t.size(); ++i) ctl.row(t[i], v[i]);
    write_atomic(path_in(cfg, "control.csv"), ctl.str());

    const StatePair Y = target_vectors(prob.target, modes);
    const Trajectory tr = controlled_solve(Y.U, Y.Ut, res.control, T, modes, SolveMethod::Duhamel, n - 1);
    Csv traj({"t", "trace", "energy"});
    for (std::size_t i = 0; i < tr.t.size(); ++i) traj.row(tr.t[i], tr.trace[i], tr.energy[i]);
    write_atomic(path_in(cfg, "trajectory.csv"), traj.str());

    const double bound = 8.0 * C_h * res.vprime_sq;
    const double duality = std::abs(res.control_norm_sq - res.pairing);
    write_summary(cfg, json{{"spec", spec.id()},
                            {"T", T},
                            {"dim", res.gram.dim()},
                            {"EL_residual", res.el_residual},
                            {"Ih", res.I_h},
                            {"control_norm_sq", res.control_norm_sq},
                            {"pairing", res.pairing},
                            {"duality_gap", duality},
                            {"max_relative_pairing", ver.max_relative_pairing},
                            {"final_state_norm", ver.final_norm},
                            {"initial_state_norm", ver.initial_norm},
                            {"C_h", number(C_h)},
                            {"control_norm_bound", number(bound)}});
    if (res.el_residual > 1e-10) throw ToleranceBreach("Euler-Lagrange residual exceeds 1e-10");
    if (ver.max_relative_pairing > 1e-8) throw ToleranceBreach("projected final-state pairing exceeds 1e-8");
    if (duality > 1e-9 * std::abs(res.pairing)) throw ToleranceBreach("duality identity mismatch exceeds 1e-9");
    if (res.control_norm_sq > bound) throw ToleranceBreach("control norm exceeds 8 C_h ||(Y1,-Y0)||^2");
}

void cmd_convergence(const RunConfig& cfg) {
    const SubspaceSpec spec = make_spec(cfg, cfg.spec);
    const double T = horizon(cfg, spec);
    const ContinuousData data = load_data(cfg.data);
    const ContinuousRef ref = (T == 2.0) ? continuous_hum_T2(data, cfg.ref_modes)
                                         : continuous_hum_galerkin(data, cfg.ref_modes, T);
    const auto rows = convergence_study(data, spec, T, ladder_or(cfg, {19, 39, 79, 159}), ref);

    Csv csv({"N", "h", "L2_error", "control_norm", "Ih", "EL_residual", "proj_final_norm"});
    bool decreasing = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        csv.row(r.N, r.h, r.L2_error, r.control_norm, r.Ih, r.EL_residual, r.proj_final_norm);
        if (i > 0 && !(r.L2_error < rows[i - 1].L2_error)) decreasing = false;
    }
    write_atomic(path_in(cfg, "study.csv"), csv.str());

    const int n = cfg.fine_grid;
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = (i == n - 1) ? T : T * i / (n - 1);
    const auto v = sample(ref.control, t);
    Csv refcsv({"t", "v_h"});
    for (std::size_t i = 0; i < t.size(); ++i) refcsv.row(t[i], v[i]);
    write_atomic(path_in(cfg, "reference_control.csv"), refcsv.str());

    json j{{"spec", spec.id()},
           {"T", T},
           {"reference_modes", ref.K},
           {"reference_norm_sq", ref.norm_sq},
           {"reference_cg_iterations", ref.iterations},
           {"reference_residual", ref.residual},
           {"strictly_decreasing", decreasing}};
    j["fitted_slope"] = rows.size() >= 2 && std::all_of(rows.begin(), rows.end(), [](const StudyRow& r) {
                            return r.L2_error > 0.0;
                        })
                            ? json(fitted_slope(rows))
                            : json(nullptr);
    write_summary(cfg, j);
    if (!decreasing) throw ToleranceBreach("L2 error is not strictly decreasing along the ladder");
}

void cmd_bigrid_demo(const RunConfig& cfg) {
    const SubspaceSpec spec = make_spec(cfg, cfg.spec);
    const double alpha = spec.kind == SubspaceKind::BiGridAlpha ? spec.alpha : 0.5;
    const GridParams g = GridParams::make(cfg.n);
    require_odd(g);
    const ModalBasis modes(g);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> c0(static_cast<std::size_t>((g.N - 1) / 2)), c1(c0.size());
    for (auto& x : c0) x = u(rng);
    for (auto& x : c1) x = u(rng);
    const ModalState st = decompose(make_bigrid_data(c0, g, alpha), make_bigrid_data(c1, g, alpha), modes);

    Csv coeffs({"mode", "Lambda", "abs_plus", "abs_minus"});
    for (int m = 0; m < modes.size(); ++m) {
        const auto i = static_cast<std::size_t>(m);
        coeffs.row(modes.pair(m).mode.label(), modes.pair(m).Lambda, std::abs(st.plus[i]), std::abs(st.minus[i]));
    }
    write_atomic(path_in(cfg, "bigrid_modes.csv"), coeffs.str());

    const EnergyRatio er = energy_ratio_bigrid(g, alpha);
    Csv ratio({"k", "lo_plus", "lo_minus", "hi_plus", "hi_minus"});
    for (std::size_t k = 0; k < er.lo_plus.size(); ++k)
        ratio.row(static_cast<int>(k + 1), er.lo_plus[k], er.lo_minus[k], er.hi_plus[k], er.hi_minus[k]);
    write_atomic(path_in(cfg, "energy_ratio.csv"), ratio.str());

    const BigridReport rep = verify_bigrid_constraints(st, modes);
    const double e = energy(st, modes);
    const double e_half = energy(project_acoustic(st, 0.5, g), modes);
    write_summary(cfg, json{{"alpha", alpha},
                            {"resonant", rep.resonant},
                            {"mid_frequency", rep.mid_frequency},
                            {"optic_acoustic", rep.optic_acoustic},
                            {"high_low", rep.high_low},
                            {"optic_acoustic_squared", rep.optic_acoustic_squared},
                            {"high_low_squared", rep.high_low_squared},
                            {"energy", e},
                            {"energy_acoustic_half", e_half},
                            {"energy_ratio", e / e_half},
                            {"max_coefficient", er.max_coefficient},
                            {"max_sum", er.max_sum}});
    if (alpha == 0.5 && rep.max() > 1e-9) throw ToleranceBreach("bi-grid constraints exceed 1e-9");
}

template <class T>
void read_key(const json& j, const char* key, T& dst) {
    if (!j.contains(key)) return;
    try {
        dst = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(std::string("config key '") + key + "' has the wrong type");
    }
}

}  // namespace

// --- config -------------------------------------------------------------

std::vector<std::string> commands() {
    return {"spectrum", "identities", "observability", "control", "convergence", "bigrid-demo"};
}

void RunConfig::validate() const {
    const auto cmds = commands();
    if (std::find(cmds.begin(), cmds.end(), command) == cmds.end())
        throw ValidationError("unknown command '" + command + "'");
    if (n < 1) throw ValidationError("--n must be at least 1");
    for (int x : n_ladder)
        if (x < 1) throw ValidationError("--n-ladder entries must be at least 1");
    if (t && !(*t > 0.0 && std::isfinite(*t))) throw ValidationError("--t must be positive");
    if (fine_grid < 2) throw ValidationError("--fine-grid must be at least 2");
    if (ref_modes < 1) throw ValidationError("--ref-modes must be at least 1");
    if (out.empty()) throw ValidationError("--out must not be empty");
    const auto specs = split_specs(spec);
    if (specs.empty()) throw ValidationError("--spec must name at least one subspace");
    if (specs.size() > 1 && command != "observability")
        throw ValidationError("only the observability command accepts several specs");
    for (const auto& s : specs) make_spec(*this, s);
}

std::string to_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["n"] = c.n;
    j["n_ladder"] = c.n_ladder;
    j["t"] = c.t ? json(*c.t) : json(nullptr);
    j["spec"] = c.spec;
    j["lambda_a_plus"] = c.lambda_a_plus;
    j["lambda_o_minus"] = c.lambda_o_minus;
    j["lambda_o_plus"] = c.lambda_o_plus;
    j["alpha"] = c.alpha;
    j["data"] = c.data;
    j["out"] = c.out;
    j["seed"] = c.seed;
    j["fine_grid"] = c.fine_grid;
    j["ref_modes"] = c.ref_modes;
    j["version"] = kVersion;
    return j.dump(2) + "\n";
}

RunConfig from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    static const std::vector<std::string> known{"command", "n", "n_ladder", "t", "spec", "lambda_a_plus",
                                                "lambda_o_minus", "lambda_o_plus", "alpha", "data", "out",
                                                "seed", "fine_grid", "ref_modes", "version"};
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ValidationError("unknown config key '" + key + "'");
    RunConfig c;
    read_key(j, "command", c.command);
    read_key(j, "n", c.n);
    read_key(j, "n_ladder", c.n_ladder);
    if (j.contains("t") && !j.at("t").is_null()) {
        double t = 0.0;
        read_key(j, "t", t);
        c.t = t;
    }
    read_key(j, "spec", c.spec);
    read_key(j, "lambda_a_plus", c.lambda_a_plus);
    read_key(j, "lambda_o_minus", c.lambda_o_minus);
    read_key(j, "lambda_o_plus", c.lambda_o_plus);
    read_key(j, "alpha", c.alpha);
    read_key(j, "data", c.data);
    read_key(j, "out", c.out);
    read_key(j, "seed", c.seed);
    read_key(j, "fine_grid", c.fine_grid);
    read_key(j, "ref_modes", c.ref_modes);
    return c;
}

SubspaceSpec make_spec(const RunConfig& cfg, const std::string& kind) {
    if (kind == "acoustic-truncation") return SubspaceSpec::acoustic_truncation(cfg.lambda_a_plus);
    switch (parse_subspace_kind(kind)) {
        case SubspaceKind::Full: return SubspaceSpec::full();
        case SubspaceKind::NonResonant: return SubspaceSpec::nonresonant();
        case SubspaceKind::Truncation:
            return SubspaceSpec::truncation(cfg.lambda_a_plus, cfg.lambda_o_minus, cfg.lambda_o_plus);
        case SubspaceKind::BiGrid: return SubspaceSpec::bigrid();
        case SubspaceKind::BiGridAlpha: return SubspaceSpec::bigrid_alpha(cfg.alpha);
    }
    throw ValidationError("unknown subspace kind '" + kind + "'");
}

std::vector<int> ladder_or(const RunConfig& cfg, std::vector<int> fallback) {
    return cfg.n_ladder.empty() ? fallback : cfg.n_ladder;
}

double horizon(const RunConfig& cfg, const SubspaceSpec& spec) {
    if (cfg.t) return *cfg.t;
    switch (spec.kind) {
        case SubspaceKind::Full:
        case SubspaceKind::NonResonant: return 4.0;
        case SubspaceKind::Truncation: return 1.2 * minimal_time(spec);
        case SubspaceKind::BiGrid:
        case SubspaceKind::BiGridAlpha: return 2.5;
    }
    return 2.5;
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_atomic(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::ios_base::failure("cannot open '" + tmp.string() + "' for writing");
        out << text;
        out.flush();
        if (!out) throw std::ios_base::failure("write to '" + tmp.string() + "' failed");
    }
    fs::rename(tmp, target);
}

// --- dispatch -----------------------------------------------------------

int dispatch(const RunConfig& cfg) {
    try {
        cfg.validate();
        write_atomic(path_in(cfg, "manifest.json"), to_json(cfg));
        if (cfg.command == "spectrum") cmd_spectrum(cfg);
        else if (cfg.command == "identities") cmd_identities(cfg);
        else if (cfg.command == "observability") cmd_observability(cfg);
        else if (cfg.command == "control") cmd_control(cfg);
        else if (cfg.command == "convergence") cmd_convergence(cfg);
        else cmd_bigrid_demo(cfg);
    } catch (const ValidationError& e) {
        std::cerr << "p2wave: invalid argument: " << e.what() << '\n';
        return kValidation;
    } catch (const ToleranceBreach& e) {
        std::cerr << "p2wave: tolerance breach: " << e.what() << '\n';
        return kToleranceBreach;
    } catch (const NumericalError& e) {
        std::cerr << "p2wave: numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "p2wave: " << e.what() << '\n';
        return kIo;
    }
    return kOk;
}

int run(int argc, char** argv) {
    CLI::App app{"P2 finite elements for the 1-d wave equation: spectra, observability and HUM controls"};
    RunConfig flags;
    std::string config_path;
    double t = 0.0;
    app.add_option("command", flags.command, "spectrum | identities | observability | control | convergence | bigrid-demo")
        ->required();
    app.add_option("--config", config_path, "JSON config file; flags take precedence");
    auto* o_n = app.add_option("--n", flags.n, "number of interior nodes N");
    auto* o_ladder = app.add_option("--n-ladder", flags.n_ladder, "comma-separated N values")->delimiter(',');
    auto* o_t = app.add_option("--t", t, "control / observation horizon T");
    auto* o_spec = app.add_option("--spec", flags.spec,
                                  "full | nonresonant | truncation | acoustic-truncation | bigrid | bigrid-alpha"
                                  " (comma list or 'all' for observability)");
    auto* o_lap = app.add_option("--lambda-a-plus", flags.lambda_a_plus, "acoustic truncation threshold");
    auto* o_lom = app.add_option("--lambda-o-minus", flags.lambda_o_minus, "upper optic threshold");
    auto* o_lop = app.add_option("--lambda-o-plus", flags.lambda_o_plus, "lower optic threshold");
    auto* o_alpha = app.add_option("--alpha", flags.alpha, "midpoint weight of the bi-grid variant");
    auto* o_data = app.add_option("--data", flags.data, "named data set or JSON file with y0/y1 coefficients");
    auto* o_out = app.add_option("--out", flags.out, "output directory");
    auto* o_seed = app.add_option("--seed", flags.seed, "random seed");
    auto* o_fine = app.add_option("--fine-grid", flags.fine_grid, "samples of exported time and wavenumber grids");
    auto* o_ref = app.add_option("--ref-modes", flags.ref_modes, "modes K of the continuous reference control");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kValidation;
    }

    RunConfig cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "p2wave: invalid argument: cannot open config '" << config_path << "'\n";
            return kValidation;
        }
        std::stringstream ss;
        ss << in.rdbuf();
        try {
            cfg = from_json(ss.str());
        } catch (const ValidationError& e) {
            std::cerr << "p2wave: invalid argument: " << e.what() << '\n';
            return kValidation;
        }
    }
    cfg.command = flags.command;
    if (o_n->count()) cfg.n = flags.n;
    if (o_ladder->count()) cfg.n_ladder = flags.n_ladder;
    if (o_t->count()) cfg.t = t;
    if (o_spec->count()) cfg.spec = flags.spec;
    if (o_lap->count()) cfg.lambda_a_plus = flags.lambda_a_plus;
    if (o_lom->count()) cfg.lambda_o_minus = flags.lambda_o_minus;
    if (o_lop->count()) cfg.lambda_o_plus = flags.lambda_o_plus;
    if (o_alpha->count()) cfg.alpha = flags.alpha;
    if (o_data->count()) cfg.data = flags.data;
    if (o_out->count()) cfg.out = flags.out;
    if (o_seed->count()) cfg.seed = flags.seed;
    if (o_fine->count()) cfg.fine_grid = flags.fine_grid;
    if (o_ref->count()) cfg.ref_modes = flags.ref_modes;
    return dispatch(cfg);
}

}  // namespace p2wave::cli
