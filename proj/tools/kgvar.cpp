// kgvar: batch front-end over the library modules. Every command prints a
// JSON report to stdout (deterministic apart from the timestamp field) and
// optionally writes artifacts under --out.
//
// Exit codes: 0 all checks passed, 1 check failed, 2 usage error,
// 3 numeric failure (non-convergence, degenerate geometry, ...).

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "kgvar/energy.hpp"
#include "kgvar/entropy.hpp"
#include "kgvar/io.hpp"
#include "kgvar/kg_solver.hpp"
#include "kgvar/relkin.hpp"

using namespace kgv;
using nlohmann::json;
using std::numbers::pi;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json base_report(const std::string& command) {
    json r;
    r["schema"] = "kgvar-report-1";
    r["command"] = command;
    r["timestamp"] = timestamp_utc();
    return r;
}

void emit(const json& report, const std::string& out_dir) {
    std::cout << report.dump(2) << "\n";
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        save_json(report, out_dir + "/report.json");
    }
}

// RFC-4180: quote a field when it contains a comma, quote or newline
std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"')
            q += '"';
        q += ch;
    }
    return q + "\"";
}

void write_csv(const std::string& path, const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out)
        throw ArgumentError("cannot open " + path);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << csv_quote(row[i]);
        out << "\r\n";
    }
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// flags shared by every subcommand
struct CommonOpts {
    bool nondim = true;
    double si_mass = 0.0; // > 0 selects SI constants for this particle mass
    std::string out_dir;
    std::string config_path;

    PhysicalConstants constants() const {
        return si_mass > 0.0 ? PhysicalConstants::si(si_mass)
                             : PhysicalConstants::nondimensional();
    }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_flag("--nondim,!--si", o.nondim, "nondimensional units m=c=hbar=gamma=1 (default)");
    cmd->add_option("--mass", o.si_mass, "particle mass in kg; switches to SI constants");
    cmd->add_option("--out", o.out_dir, "directory for report and artifact files");
    cmd->add_option("--config", o.config_path, "JSON file whose keys override flags");
}

// --config overrides: a flat JSON object of long-option names to values
void apply_config(CLI::App* cmd, const CommonOpts& o) {
    if (o.config_path.empty())
        return;
    const json cfg = load_json(o.config_path);
    if (!cfg.is_object())
        throw ArgumentError("config: expected a JSON object of option names");
    for (const auto& [key, value] : cfg.items()) {
        CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (!opt)
            throw ArgumentError("config: unknown option \"" + key + "\"");
        const std::string repr = value.is_string() ? value.get<std::string>() : value.dump();
        opt->clear();
        opt->add_result(repr);
        opt->run_callback();
    }
}

std::vector<double> parse_triple(const std::string& s, const char* what) {
    std::vector<double> v;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const std::size_t comma = s.find(',', pos);
        const std::string tok = s.substr(pos, comma == std::string::npos ? comma : comma - pos);
        try {
            v.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ArgumentError(std::string(what) + ": expected comma-separated numbers");
        }
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    return v;
}

// ---------------------------------------------------------------- eig ----

struct EigOpts {
    CommonOpts common;
    std::string box = "1,1,1";
    int n = 16;
    int k = 1;
};

int cmd_eig(const EigOpts& o) {
    const auto box = parse_triple(o.box, "--box");
    if (box.size() != 3)
        throw ArgumentError("--box: expected three extents");
    Grid grid({{0.0, box[0], o.n}, {0.0, box[1], o.n}, {0.0, box[2], o.n}});
    const PhysicalConstants consts = o.common.constants();

    std::vector<EigenPair> eigs = laplacian_eigs(grid, o.k);

    // analytic box spectrum for comparison
    std::vector<double> analytic;
    for (int i = 1; i <= o.k + 3; ++i)
        for (int j = 1; j <= o.k + 3; ++j)
            for (int l = 1; l <= o.k + 3; ++l)
                analytic.push_back(pi * pi *
                                   (i * i / (box[0] * box[0]) + j * j / (box[1] * box[1]) +
                                    l * l / (box[2] * box[2])));
    std::sort(analytic.begin(), analytic.end());
    analytic.resize(static_cast<std::size_t>(o.k));

    json report = base_report("eig");
    report["box"] = box;
    report["n"] = o.n;
    report["k"] = o.k;
    json modes = json::array();
    for (int i = 0; i < o.k; ++i) {
        const EigenPair& ep = eigs[static_cast<std::size_t>(i)];
        DispersionRoots roots = solve_E1(ep.lambda, consts);
        json m;
        m["lambda"] = ep.lambda;
        m["lambda_analytic"] = analytic[static_cast<std::size_t>(i)];
        m["lambda_rel_error"] =
            std::abs(ep.lambda - analytic[static_cast<std::size_t>(i)]) /
            analytic[static_cast<std::size_t>(i)];
        m["E1_plus"] = roots.E1_plus;
        m["E1_minus"] = roots.E1_minus;
        m["E1_principal"] = roots.principal();
        m["E2"] = dispersion_E2(roots.principal(), consts);
        modes.push_back(std::move(m));
    }
    report["modes"] = std::move(modes);

    // degeneracy clusters (relative gap below 1e-8)
    json clusters = json::array();
    for (int lo = 0; lo < o.k;) {
        int hi = lo + 1;
        while (hi < o.k &&
               std::abs(eigs[static_cast<std::size_t>(hi)].lambda -
                        eigs[static_cast<std::size_t>(lo)].lambda) <
                   1e-8 * std::max(1.0, eigs[static_cast<std::size_t>(lo)].lambda))
            ++hi;
        clusters.push_back({{"lambda", eigs[static_cast<std::size_t>(lo)].lambda},
                            {"size", hi - lo}});
        lo = hi;
    }
    report["degeneracy_clusters"] = std::move(clusters);

    // discretization-aware gate on the ground state
    double hmax = 0.0;
    for (int a = 0; a < grid.dim(); ++a)
        hmax = std::max(hmax, grid.spacing(a));
    const double tol = std::max(0.005, pi * pi * hmax * hmax / 6.0);
    const double err1 = report["modes"][0]["lambda_rel_error"].get<double>();
    report["lambda1_tolerance"] = tol;
    report["passed"] = err1 <= tol;

    if (!o.common.out_dir.empty()) {
        std::filesystem::create_directories(o.common.out_dir);
        for (int i = 0; i < o.k; ++i)
            save_json(field_to_json(eigs[static_cast<std::size_t>(i)].phi2),
                      o.common.out_dir + "/mode_" + std::to_string(i) + ".json");
    }
    emit(report, o.common.out_dir);
    return report["passed"].get<bool>() ? kExitOk : kExitCheckFailed;
}

// ------------------------------------------------------- reduce-check ----

struct ReduceOpts {
    CommonOpts common;
    int n = 16;
    int nt = 16;
    double perturb = 0.0;
};

int cmd_reduce_check(const ReduceOpts& o) {
    const double eps = o.perturb;

    // Minkowski flat space-time, first form
    Grid st({{0.0, 1.0, o.nt}, {0.0, 1.0, o.n}, {0.0, 1.0, o.n}, {0.0, 1.0, o.n}}, true);
    VectorField r4 = VectorField::sample(st, 4, [&](std::span<const double> x, std::span<double> out) {
        for (int i = 0; i < 4; ++i)
            out[i] = x[static_cast<std::size_t>(i)];
        out[1] += eps * std::sin(pi * x[1]) * std::sin(pi * x[2]);
    });
    ScalarField phi4 = ScalarField::sample(st, [](std::span<const double> x) {
        return Complex(std::sin(pi * x[1]) * std::cos(0.5 * x[0]),
                       0.4 * std::sin(pi * x[2]) * std::sin(pi * x[3]));
    });
    MetricData m4 = metric(tangent_basis(r4), Signature::Minkowski);
    ScalarField rhat4 = curvature_density_first(phi4, r4, m4, christoffel(r4, m4));
    std::array<ScalarField, 4> d4{partial(phi4, 0), partial(phi4, 1), partial(phi4, 2),
                                  partial(phi4, 3)};
    double dev_first = 0.0;
    for (std::size_t p = 0; p < st.size(); ++p) {
        double flat = -std::norm(d4[0].values[p]);
        for (int a = 1; a < 4; ++a)
            flat += std::norm(d4[static_cast<std::size_t>(a)].values[p]);
        dev_first = std::max(dev_first, std::abs(rhat4.values[p] - flat));
    }

    // Euclidean spatial slice, normal form with a constant unit normal
    Grid sg({{0.0, 1.0, o.n}, {0.0, 1.0, o.n}, {0.0, 1.0, o.n}});
    // the control must rescale the normal direction; shear warps with a
    // constant unit n leave the contracted density at exactly |grad phi|^2
    VectorField r3 = VectorField::sample(sg, 3, [&](std::span<const double> x, std::span<double> out) {
        out[0] = x[0];
        out[1] = x[1];
        out[2] = x[2] * (1.0 + eps * std::sin(pi * x[0]) * std::sin(pi * x[1]));
    });
    ScalarField phi3 = ScalarField::sample(sg, [](std::span<const double> x) {
        return Complex(std::sin(pi * x[0]) * std::sin(pi * x[1]),
                       0.3 * std::sin(pi * x[2]));
    });
    VectorField nfield = VectorField::sample(sg, 3, [](std::span<const double>, std::span<double> out) {
        out[0] = 0.0;
        out[1] = 0.0;
        out[2] = 1.0;
    });
    MetricData m3 = metric(tangent_basis(r3), Signature::Euclidean);
    ScalarField rhat3 = curvature_density_normal(phi3, nfield, r3, m3);
    std::array<ScalarField, 3> d3{partial(phi3, 0), partial(phi3, 1), partial(phi3, 2)};
    double dev_normal = 0.0;
    for (std::size_t p = 0; p < sg.size(); ++p) {
        double flat = 0.0;
        for (int a = 0; a < 3; ++a)
            flat += std::norm(d3[static_cast<std::size_t>(a)].values[p]);
        dev_normal = std::max(dev_normal, std::abs(rhat3.values[p] - flat));
    }

    const double threshold = 1e-9;
    json report = base_report("reduce-check");
    report["n"] = o.n;
    report["nt"] = o.nt;
    report["perturb"] = eps;
    report["threshold"] = threshold;
    report["first_form_max_deviation"] = dev_first;
    report["normal_form_max_deviation"] = dev_normal;
    report["passed"] = dev_first <= threshold && dev_normal <= threshold;
    emit(report, o.common.out_dir);
    return report["passed"].get<bool>() ? kExitOk : kExitCheckFailed;
}

// ------------------------------------------------------------ residual ----

struct ResidualOpts {
    CommonOpts common;
    int mode = 1;
    int n0 = 9;
    int nt0 = 9;
    int refine = 2;
};

int cmd_residual(const ResidualOpts& o) {
    if (o.mode < 1)
        throw ArgumentError("--mode must be >= 1");
    if (o.refine < 2)
        throw ArgumentError("--refine must be >= 2");
    const PhysicalConstants consts = o.common.constants();

    std::vector<std::vector<std::string>> csv{{"n", "nt", "h", "kg_residual", "skg_residual"}};
    std::vector<double> kg_norms, skg_norms, hs;
    double sub_mismatch = 0.0;

    for (int level = 0; level < o.refine; ++level) {
        const int n = (o.n0 - 1) * (1 << level) + 1;
        const int nt = (o.nt0 - 1) * (1 << level) + 1;
        Grid sgrid({{0.0, 1.0, n}, {0.0, 1.0, n}, {0.0, 1.0, n}});
        std::vector<EigenPair> eigs = laplacian_eigs(sgrid, o.mode);
        const EigenPair& ep = eigs[static_cast<std::size_t>(o.mode - 1)];
        const double E1 = solve_E1(ep.lambda, consts).principal();
        ScalarField phi = stationary_state(ep, E1, Axis{0.0, consts.c, nt}, consts); // T = 1

        std::vector<double> E1s(static_cast<std::size_t>(nt), E1);
        const double kg = kg_residual(phi, E1s, consts);
        const double skg = skg_residual(phi, consts);

        // discrete time substitution: i hbar D_t acts on the phase as
        // E1 sinc(E1 h_t / hbar), which must make both residuals coincide
        const double ht = phi.grid.spacing(0) / consts.c;
        const double E1d = consts.hbar * std::sin(E1 * ht / consts.hbar) / ht;
        std::vector<double> E1ds(static_cast<std::size_t>(nt), E1d);
        ScalarField a = kg_residual_field(phi, E1ds, consts);
        ScalarField b = skg_residual_field(phi, consts);
        double scale = 0.0;
        for (const Complex& v : phi.values)
            scale = std::max(scale, std::abs(v));
        for (std::size_t p = 0; p < phi.grid.size(); ++p)
            sub_mismatch =
                std::max(sub_mismatch, std::abs(a.values[p] - b.values[p]) / scale);

        kg_norms.push_back(kg);
        skg_norms.push_back(skg);
        hs.push_back(sgrid.spacing(0));
        csv.push_back({fmt(n), fmt(nt), fmt(sgrid.spacing(0)), fmt(kg), fmt(skg)});
    }

    double min_order = 1e30;
    json orders = json::array();
    for (std::size_t l = 0; l + 1 < kg_norms.size(); ++l) {
        const double okg = std::log2(kg_norms[l] / kg_norms[l + 1]);
        const double oskg = std::log2(skg_norms[l] / skg_norms[l + 1]);
        orders.push_back({{"kg", okg}, {"skg", oskg}});
        min_order = std::min({min_order, okg, oskg});
    }

    json report = base_report("residual");
    report["mode"] = o.mode;
    report["levels"] = json::array();
    for (std::size_t l = 0; l < kg_norms.size(); ++l)
        report["levels"].push_back(
            {{"h", hs[l]}, {"kg_residual", kg_norms[l]}, {"skg_residual", skg_norms[l]}});
    report["observed_orders"] = std::move(orders);
    report["min_observed_order"] = min_order;
    report["substitution_mismatch"] = sub_mismatch;
    report["passed"] = min_order >= 1.9 && sub_mismatch <= 1e-12;
    if (!o.common.out_dir.empty()) {
        std::filesystem::create_directories(o.common.out_dir);
        write_csv(o.common.out_dir + "/residual.csv", csv);
    }
    emit(report, o.common.out_dir);
    return report["passed"].get<bool>() ? kExitOk : kExitCheckFailed;
}

// --------------------------------------------------------------- boost ----

struct BoostOpts {
    CommonOpts common;
    std::string v = "0,0,0";
    std::string event = "0,0,0,0"; // t,x,y,z
};

int cmd_boost(const BoostOpts& o) {
    const auto vv = parse_triple(o.v, "--v");
    const auto ev = parse_triple(o.event, "--event");
    if (vv.size() != 3)
        throw ArgumentError("--v: expected three components");
    if (ev.size() != 4)
        throw ArgumentError("--event: expected t,x,y,z");
    const PhysicalConstants consts = o.common.constants();

    Event e{ev[0], {ev[1], ev[2], ev[3]}};
    BoostVelocity bv{{vv[0], vv[1], vv[2]}};
    Event out = boost(e, bv, consts);
    BoostVelocity back{{-vv[0], -vv[1], -vv[2]}};
    Event rt = boost(out, back, consts);

    auto interval = [&](const Event& q) {
        return -consts.c * consts.c * q.t * q.t + q.x[0] * q.x[0] + q.x[1] * q.x[1] +
               q.x[2] * q.x[2];
    };
    const double s0 = interval(e), s1 = interval(out);
    const double interval_dev = std::abs(s1 - s0) / std::max(1.0, std::abs(s0));
    const double rt_dev = std::max({std::abs(rt.t - e.t), std::abs(rt.x[0] - e.x[0]),
                                    std::abs(rt.x[1] - e.x[1]), std::abs(rt.x[2] - e.x[2])});

    json report = base_report("boost");
    report["v"] = vv;
    report["event"] = {e.t, e.x[0], e.x[1], e.x[2]};
    report["boosted"] = {out.t, out.x[0], out.x[1], out.x[2]};
    report["interval_rel_deviation"] = interval_dev;
    report["round_trip_deviation"] = rt_dev;
    report["passed"] = interval_dev <= 1e-10 && rt_dev <= 1e-12;
    emit(report, o.common.out_dir);
    return report["passed"].get<bool>() ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------- spin ----

struct SpinOpts {
    CommonOpts common;
    std::string v = "0.25,-0.15,0.1";
    bool static_case = false;
    int n = 9;
    double eps = 1e-5;
};

int cmd_spin(const SpinOpts& o) {
    const PhysicalConstants consts = o.common.constants();
    auto vv = parse_triple(o.v, "--v");
    if (vv.size() != 3)
        throw ArgumentError("--v: expected three components");
    if (o.static_case)
        vv = {0.0, 0.0, 0.0};
    const std::array<double, 3> u{vv[0], vv[1], vv[2]};

    Grid st({{0.0, 0.5, o.n}, {-0.6, 0.6, o.n}, {-0.6, 0.6, o.n}, {-0.6, 0.6, o.n}}, true);
    VectorField r = VectorField::sample(st, 3, [&](std::span<const double> x, std::span<double> out) {
        for (int k = 0; k < 3; ++k)
            out[k] = x[static_cast<std::size_t>(k + 1)] + u[static_cast<std::size_t>(k)] * x[0];
    });

    auto phi_hat = [](const Event& e) {
        const double r2 = e.x[0] * e.x[0] + e.x[1] * e.x[1] + e.x[2] * e.x[2];
        const double phase = 0.7 * e.x[0] - 0.4 * e.x[1] + 0.3 * e.x[2] - 0.5 * e.t;
        return std::exp(-0.5 * r2) * std::exp(Complex(0.0, phase));
    };
    auto sample = [&](double rot) {
        const BoostVelocity bv{u};
        return ScalarField::sample(st, [&](std::span<const double> x) {
            const double ce = std::cos(rot), se = std::sin(rot);
            Event e;
            e.t = x[0] / consts.c;
            e.x = {ce * x[1] - se * x[2] + u[0] * e.t, se * x[1] + ce * x[2] + u[1] * e.t,
                   x[3] + u[2] * e.t};
            return phi_hat(boost(e, bv, consts));
        });
    };

    ScalarField phi = sample(0.0);
    AngularDecomposition d = angular_decompose_z(phi, r, consts);
    ScalarField plus = sample(o.eps), minus = sample(-o.eps);

    double jz = 0.0, lz = 0.0, sz = 0.0, mismatch = 0.0, split = 0.0;
    for (std::size_t p = 0; p < st.size(); ++p) {
        jz = std::max(jz, std::abs(d.Jz.values[p]));
        lz = std::max(lz, std::abs(d.Lz.values[p]));
        sz = std::max(sz, std::abs(d.Sz.values[p]));
        split = std::max(split,
                         std::abs(d.Jz.values[p] - (d.Lz.values[p] + d.Sz.values[p])));
        const Complex oracle = Complex(0.0, -consts.hbar) *
                               (plus.values[p] - minus.values[p]) / (2.0 * o.eps);
        mismatch = std::max(mismatch, std::abs(d.Jz.values[p] - oracle));
    }

    // L_z eigenrelation on X1 + i X2 (exact for the affine stencils)
    ScalarField lzprobe = ScalarField::sample(st, [](std::span<const double> x) {
        return Complex(x[1], x[2]);
    });
    VectorField rstatic = VectorField::sample(st, 3, [](std::span<const double> x, std::span<double> out) {
        out[0] = x[1];
        out[1] = x[2];
        out[2] = x[3];
    });
    AngularDecomposition dp = angular_decompose_z(lzprobe, rstatic, consts);
    double lz_eig_err = 0.0;
    for (std::size_t p = 0; p < st.size(); ++p)
        lz_eig_err = std::max(lz_eig_err,
                              std::abs(dp.Lz.values[p] - consts.hbar * lzprobe.values[p]));

    const double h = st.spacing(1);
    const double declared_tol = 10.0 * (o.eps * o.eps + h * h);
    json report = base_report("spin");
    report["v"] = {u[0], u[1], u[2]};
    report["n"] = o.n;
    report["eps"] = o.eps;
    report["norm_Jz"] = jz;
    report["norm_Lz"] = lz;
    report["norm_Sz"] = sz;
    report["split_identity_max"] = split;
    report["oracle_mismatch"] = mismatch;
    report["declared_tolerance"] = declared_tol;
    report["lz_eigen_error"] = lz_eig_err;
    bool pass = split <= 1e-12 && mismatch <= declared_tol && lz_eig_err <= 1e-10;
    if (o.static_case) {
        report["static_Sz_norm"] = sz;
        pass = pass && sz == 0.0;
    }
    report["passed"] = pass;
    emit(report, o.common.out_dir);
    return pass ? kExitOk : kExitCheckFailed;
}

// ------------------------------------------------------------- entropy ----

struct EntropyOpts {
    CommonOpts common;
    int nx = 101;
    int nt = 5;
    int levels = 256;
};

int cmd_entropy(const EntropyOpts& o) {
    if (o.levels < 2)
        throw ArgumentError("--levels must be >= 2");
    // two-level demo profile: E = 0 on the left half, 1 on the right,
    // phi = 1 with unit trapezoid mass
    Grid st({{0.0, 2.0, o.nt}, {0.0, 1.0, o.nx}}, true);
    Grid sg = st.spatial();
    ScalarField E1 = ScalarField::sample(st, [](std::span<const double> x) {
        return Complex(x[1] <= 0.5 ? 0.0 : 1.0);
    });
    ScalarField phi = ScalarField::sample(sg, [](auto) { return Complex(1.0); });
    EnergyProfile prof = make_profile(E1, phi, 0.0);

    const double E_lo = -0.5, E_hi = 1.5;
    std::vector<std::vector<std::string>> csv{{"E", "W", "neg_W_ln_W", "S"}};
    bool monotone = true, bounded = true;
    double prev = -1.0;
    for (int i = 0; i < o.levels; ++i) {
        const double E = E_lo + (E_hi - E_lo) * i / (o.levels - 1);
        const double w = sublevel_W(prof, E);
        monotone = monotone && w >= prev;
        bounded = bounded && w >= 0.0 && w <= 1.0 + 1e-6;
        prev = w;
        csv.push_back({fmt(E), fmt(w), fmt(inverse_temperature(prof, E)),
                       fmt(entropy_S(prof, E_lo, E, std::max(2, i + 1)))});
    }

    const double s_total = entropy_S(prof, E_lo, E_hi, o.levels);
    const double wp = sublevel_W(prof, 0.5);
    const double closed_form = -wp * std::log(wp); // plateau width 1
    const double s_rel_err = std::abs(s_total - closed_form) / closed_form;

    const double delta = 0.1;
    const double fd = (entropy_S(prof, E_lo, 0.5 + delta, o.levels) -
                       entropy_S(prof, E_lo, 0.5 - delta, o.levels)) /
                      (2.0 * delta);
    const double slope = inverse_temperature(prof, 0.5);
    const double slope_rel_err = std::abs(fd - slope) / slope;

    json report = base_report("entropy");
    report["nx"] = o.nx;
    report["nt"] = o.nt;
    report["levels"] = o.levels;
    report["W_monotone"] = monotone;
    report["W_bounded"] = bounded;
    report["S_total"] = s_total;
    report["S_closed_form"] = closed_form;
    report["S_rel_error"] = s_rel_err;
    report["dSdE_rel_error"] = slope_rel_err;
    report["passed"] = monotone && bounded && s_rel_err <= 0.02 && slope_rel_err <= 0.02;
    if (!o.common.out_dir.empty()) {
        std::filesystem::create_directories(o.common.out_dir);
        write_csv(o.common.out_dir + "/entropy.csv", csv);
    }
    emit(report, o.common.out_dir);
    return report["passed"].get<bool>() ? kExitOk : kExitCheckFailed;
}

// --------------------------------------------------------- christoffel ----

struct ChristoffelOpts {
    CommonOpts common;
    std::string geometry = "polar";
    int n = 17;
};

double polar_gamma_err(int n) {
    Grid g({{0.5, 1.5, n}, {0.2, 1.2, n}});
    VectorField r = VectorField::sample(g, 2, [](std::span<const double> x, std::span<double> out) {
        out[0] = x[0] * std::cos(x[1]);
        out[1] = x[0] * std::sin(x[1]);
    });
    MetricData m = metric(tangent_basis(r), Signature::Euclidean);
    ChristoffelField cf = christoffel(r, m);
    double e = 0.0;
    std::vector<int> idx(2);
    for (std::size_t p = 0; p < g.size(); ++p) {
        g.unflatten(p, idx);
        if (idx[0] < 2 || idx[0] > n - 3 || idx[1] < 2 || idx[1] > n - 3)
            continue;
        const double u1 = g.coord(0, idx[0]);
        e = std::max(e, std::abs(cf.get(p, 0, 1, 1) + u1));
        e = std::max(e, std::abs(cf.get(p, 1, 0, 1) - 1.0 / u1));
    }
    return e;
}

double spherical_gamma_err(int n) {
    Grid g({{1.0, 2.0, n}, {0.5, 1.0, n}, {0.5, 1.0, n}});
    VectorField r = VectorField::sample(g, 3, [](std::span<const double> x, std::span<double> out) {
        out[0] = x[0] * std::sin(x[1]) * std::cos(x[2]);
        out[1] = x[0] * std::sin(x[1]) * std::sin(x[2]);
        out[2] = x[0] * std::cos(x[1]);
    });
    MetricData m = metric(tangent_basis(r), Signature::Euclidean);
    ChristoffelField cf = christoffel(r, m);
    double e = 0.0;
    std::vector<int> idx(3);
    for (std::size_t p = 0; p < g.size(); ++p) {
        g.unflatten(p, idx);
        if (idx[0] < 2 || idx[0] > n - 3 || idx[1] < 2 || idx[1] > n - 3 || idx[2] < 2 ||
            idx[2] > n - 3)
            continue;
        const double rho = g.coord(0, idx[0]);
        const double th = g.coord(1, idx[1]);
        e = std::max(e, std::abs(cf.get(p, 0, 1, 1) + rho));
        e = std::max(e, std::abs(cf.get(p, 0, 2, 2) + rho * std::sin(th) * std::sin(th)));
        e = std::max(e, std::abs(cf.get(p, 1, 0, 1) - 1.0 / rho));
        e = std::max(e, std::abs(cf.get(p, 1, 2, 2) + std::sin(th) * std::cos(th)));
        e = std::max(e, std::abs(cf.get(p, 2, 0, 2) - 1.0 / rho));
        e = std::max(e, std::abs(cf.get(p, 2, 1, 2) - std::cos(th) / std::sin(th)));
    }
    return e;
}

int cmd_christoffel(const ChristoffelOpts& o) {
    json report = base_report("christoffel");
    report["geometry"] = o.geometry;
    report["n"] = o.n;
    bool pass = false;

    if (o.geometry == "affine") {
        Grid g({{0.0, 1.0, o.n}, {0.0, 1.0, o.n}, {0.0, 1.0, o.n}});
        VectorField r = VectorField::sample(g, 3, [](std::span<const double> x, std::span<double> out) {
            out[0] = 2.0 * x[0] - 0.3 * x[1] + 0.1;
            out[1] = 0.5 * x[0] + 1.5 * x[1] + 0.2 * x[2];
            out[2] = x[2] - 0.4 * x[0] + 1.0;
        });
        MetricData m = metric(tangent_basis(r), Signature::Euclidean);
        ChristoffelField cf = christoffel(r, m);
        double gnorm = 0.0;
        for (double v : cf.gamma)
            gnorm = std::max(gnorm, std::abs(v));
        report["gamma_max"] = gnorm;
        pass = gnorm <= 1e-8;
    } else if (o.geometry == "polar" || o.geometry == "spherical") {
        auto err = o.geometry == "polar" ? polar_gamma_err : spherical_gamma_err;
        const int n2 = 2 * o.n - 1;
        const double e1 = err(o.n), e2 = err(n2);
        const double order = std::log2(e1 / e2);
        report["max_error_coarse"] = e1;
        report["max_error_fine"] = e2;
        report["observed_order"] = order;
        pass = order >= 1.9;
        if (!o.common.out_dir.empty()) {
            std::filesystem::create_directories(o.common.out_dir);
            write_csv(o.common.out_dir + "/christoffel.csv",
                      {{"n", "max_error"},
                       {fmt(o.n), fmt(e1)},
                       {fmt(n2), fmt(e2)}});
        }
    } else {
        throw ArgumentError("--geometry must be polar, spherical or affine");
    }

    report["passed"] = pass;
    emit(report, o.common.out_dir);
    return pass ? kExitOk : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"variational Klein-Gordon toolbox"};
    app.require_subcommand(1);

    EigOpts eig;
    CLI::App* c_eig = app.add_subcommand("eig", "Dirichlet Laplacian eigenmodes and dispersion");
    c_eig->add_option("--box", eig.box, "box extents Lx,Ly,Lz");
    c_eig->add_option("--n", eig.n, "grid points per axis")->check(CLI::Range(3, 1 << 20));
    c_eig->add_option("--k", eig.k, "number of modes")->check(CLI::PositiveNumber);
    add_common(c_eig, eig.common);

    ReduceOpts red;
    CLI::App* c_red = app.add_subcommand("reduce-check", "flat-limit curvature identities");
    c_red->add_option("--n", red.n, "spatial points per axis")->check(CLI::Range(3, 1 << 20));
    c_red->add_option("--nt", red.nt, "time samples")->check(CLI::Range(3, 1 << 20));
    c_red->add_option("--perturb", red.perturb, "warp amplitude for the negative control");
    add_common(c_red, red.common);

    ResidualOpts res;
    CLI::App* c_res = app.add_subcommand("residual", "Klein-Gordon residual convergence");
    c_res->add_option("--mode", res.mode, "eigenmode index (1-based)");
    c_res->add_option("--n", res.n0, "coarsest spatial points per axis")->check(CLI::Range(3, 1 << 20));
    c_res->add_option("--nt", res.nt0, "coarsest time samples")->check(CLI::Range(3, 1 << 20));
    c_res->add_option("--refine", res.refine, "number of refinement levels");
    add_common(c_res, res.common);

    BoostOpts bst;
    CLI::App* c_bst = app.add_subcommand("boost", "Lorentz boost of an event");
    c_bst->add_option("--v", bst.v, "boost velocity vx,vy,vz");
    c_bst->add_option("--event", bst.event, "event t,x,y,z");
    add_common(c_bst, bst.common);

    SpinOpts spn;
    CLI::App* c_spn = app.add_subcommand("spin", "angular momentum decomposition Jz = Lz + Sz");
    c_spn->add_option("--v", spn.v, "trajectory velocity vx,vy,vz");
    c_spn->add_flag("--static", spn.static_case, "static trajectory (v = 0)");
    c_spn->add_option("--n", spn.n, "points per axis")->check(CLI::Range(5, 1 << 20));
    c_spn->add_option("--eps", spn.eps, "rotation step of the derivative oracle");
    add_common(c_spn, spn.common);

    EntropyOpts ent;
    CLI::App* c_ent = app.add_subcommand("entropy", "sublevel measure, entropy and temperature");
    c_ent->add_option("--nx", ent.nx, "spatial points")->check(CLI::Range(3, 1 << 20));
    c_ent->add_option("--nt", ent.nt, "time samples")->check(CLI::Range(3, 1 << 20));
    c_ent->add_option("--levels", ent.levels, "energy levels for the quadrature");
    add_common(c_ent, ent.common);

    ChristoffelOpts chr;
    CLI::App* c_chr = app.add_subcommand("christoffel", "Christoffel symbols against analytic maps");
    c_chr->add_option("--geometry", chr.geometry, "polar | spherical | affine");
    c_chr->add_option("--n", chr.n, "points per axis")->check(CLI::Range(5, 1 << 20));
    add_common(c_chr, chr.common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (c_eig->parsed()) {
            apply_config(c_eig, eig.common);
            return cmd_eig(eig);
        }
        if (c_red->parsed()) {
            apply_config(c_red, red.common);
            return cmd_reduce_check(red);
        }
        if (c_res->parsed()) {
            apply_config(c_res, res.common);
            return cmd_residual(res);
        }
        if (c_bst->parsed()) {
            apply_config(c_bst, bst.common);
            return cmd_boost(bst);
        }
        if (c_spn->parsed()) {
            apply_config(c_spn, spn.common);
            return cmd_spin(spn);
        }
        if (c_ent->parsed()) {
            apply_config(c_ent, ent.common);
            return cmd_entropy(ent);
        }
        if (c_chr->parsed()) {
            apply_config(c_chr, chr.common);
            return cmd_christoffel(chr);
        }
    } catch (const ArgumentError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitUsage;
}
