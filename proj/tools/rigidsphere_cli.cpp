#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rigidsphere/curvature.hpp"
#include "rigidsphere/error.hpp"
#include "rigidsphere/maps.hpp"
#include "rigidsphere/normalization.hpp"
#include "rigidsphere/parameters.hpp"
#include "rigidsphere/series_json.hpp"
#include "rigidsphere/surfaces.hpp"
#include "verify_suites.hpp"

using nlohmann::json;
using namespace rigidsphere;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Values of every parameter flag; only flags given on the command line
// override a params file.
struct ParamFlags {
    std::string source = "coeffs";
    std::string params_file;
    int root_index = -1;
    double c22 = 0, c23_re = 0, c23_im = 0, c33 = 0;
    double tau = 0, a_re = 0, a_im = 0, rho = 0, phi = 0;
    double b_re = 0, b_im = 0, r = 0, theta = 0;
    std::vector<std::pair<std::string, CLI::Option *>> numeric;
    CLI::Option *source_opt = nullptr;
};

struct CommonFlags {
    int cap = 10;
    std::string output;
    std::string format = "json";
};

int default_cap()
{
    const char *env = std::getenv("RIGID_SPHERE_CAP");
    if (env == nullptr || *env == '\0') {
        return 10;
    }
    char *end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 4 || v > 16) {
        throw UsageError("RIGID_SPHERE_CAP must be an integer in [4, 16]");
    }
    return static_cast<int>(v);
}

void add_param_flags(CLI::App *cmd, ParamFlags &p)
{
    p.source_opt = cmd->add_option("--source", p.source, "Parameter source")
                       ->check(CLI::IsMember({"coeffs", "twist", "stanton"}));
    cmd->add_option("--params-file", p.params_file, "JSON file with a flat parameter object")
        ->check(CLI::ExistingFile);
    cmd->add_option("--root-index", p.root_index, "Real root of the cubic to use (ascending phi)")
        ->check(CLI::NonNegativeNumber);
    const auto add = [&](const std::string &flag, const std::string &field, double &target, const std::string &help) {
        p.numeric.emplace_back(field, cmd->add_option(flag, target, help));
    };
    add("--c22", "c22", p.c22, "Normal form coefficient c22");
    add("--c23-re", "c23_re", p.c23_re, "Real part of c23");
    add("--c23-im", "c23_im", p.c23_im, "Imaginary part of c23");
    add("--c33", "c33", p.c33, "Normal form coefficient c33");
    add("--tau", "tau", p.tau, "Twist parameter tau");
    add("--a-re", "a_re", p.a_re, "Real part of a");
    add("--a-im", "a_im", p.a_im, "Imaginary part of a");
    add("--rho", "rho", p.rho, "Twist parameter rho");
    add("--phi", "phi", p.phi, "Root phi of the cubic");
    add("--b-re", "b_re", p.b_re, "Real part of Stanton's b");
    add("--b-im", "b_im", p.b_im, "Imaginary part of Stanton's b");
    add("--r", "r", p.r, "Stanton's r");
    add("--theta", "theta", p.theta, "Stanton's theta");
}

void add_common_flags(CLI::App *cmd, CommonFlags &c, bool csv_allowed)
{
    cmd->add_option("--cap", c.cap, "Truncation degree (default 10, or RIGID_SPHERE_CAP)")->check(CLI::Range(4, 16));
    cmd->add_option("--output", c.output, "Write the result to this file instead of stdout");
    if (csv_allowed) {
        cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    } else {
        cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json"}));
    }
}

json read_json_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw UsageError(path + ": " + e.what());
    }
}

json merged_params(const ParamFlags &p, std::string &source)
{
    json j = json::object();
    source = p.source;
    if (!p.params_file.empty()) {
        j = read_json_file(p.params_file);
        if (!j.is_object()) {
            throw UsageError("params file must hold a JSON object");
        }
        if (j.contains("source") && p.source_opt->count() == 0) {
            source = j.at("source").get<std::string>();
        }
    }
    for (const auto &[field, opt] : p.numeric) {
        if (opt->count() > 0) {
            j[field] = opt->as<double>();
        }
    }
    if (source != "coeffs" && source != "twist" && source != "stanton") {
        throw UsageError("unknown parameter source \"" + source + "\"");
    }
    for (const auto &[key, value] : j.items()) {
        if (key != "source" && !value.is_number()) {
            throw UsageError("parameter \"" + key + "\" must be a number");
        }
    }
    return j;
}

struct ResolvedParams {
    std::string source;
    json input;
    NormalFormCoeffs coeffs;
    std::vector<TwistParams> roots;
    TwistParams twist;
    std::size_t root_index = 0;
    std::optional<StantonParams> stanton;
};

std::size_t pick_root(const std::vector<TwistParams> &roots, int requested)
{
    if (requested < 0) {
        return default_root_index(roots);
    }
    if (static_cast<std::size_t>(requested) >= roots.size()) {
        throw UsageError("--root-index " + std::to_string(requested) + " out of range; " + std::to_string(roots.size())
                         + " real root(s)");
    }
    return static_cast<std::size_t>(requested);
}

ResolvedParams resolve(const ParamFlags &p)
{
    ResolvedParams r;
    r.input = merged_params(p, r.source);
    if (r.source == "coeffs") {
        r.coeffs = r.input.get<NormalFormCoeffs>();
        r.roots = coeffs_to_twist(r.coeffs);
        r.root_index = pick_root(r.roots, p.root_index);
        r.twist = r.roots[r.root_index];
    } else if (r.source == "twist") {
        const auto t = r.input.get<TwistParams>();
        r.coeffs = twist_to_coeffs(t);
        r.roots = coeffs_to_twist(r.coeffs);
        if (r.input.contains("phi")) {
            r.twist = t;
            r.root_index = 0;
            for (std::size_t i = 1; i < r.roots.size(); ++i) {
                if (std::abs(r.roots[i].phi - t.phi) < std::abs(r.roots[r.root_index].phi - t.phi)) {
                    r.root_index = i;
                }
            }
            if (std::abs(t.cubic_defect()) > 1e-9 * std::max(1.0, std::norm(t.a))) {
                std::cerr << "warning: phi is not a root of the cubic (defect " << t.cubic_defect() << ")\n";
            }
        } else {
            r.root_index = pick_root(r.roots, p.root_index);
            r.twist = r.roots[r.root_index];
        }
    } else {
        const auto s = r.input.get<StantonParams>();
        if (s.r == 0.0 && s.theta == 0.0) {
            throw UsageError("Stanton parameters need r + i theta != 0");
        }
        r.stanton = s;
        r.coeffs = stanton_to_coeffs(s);
        r.roots = coeffs_to_twist(r.coeffs);
        r.twist = stanton_to_twist(s);
        r.root_index = 0;
        for (std::size_t i = 1; i < r.roots.size(); ++i) {
            if (std::abs(r.roots[i].phi - r.twist.phi) < std::abs(r.roots[r.root_index].phi - r.twist.phi)) {
                r.root_index = i;
            }
        }
    }
    return r;
}

void emit(const std::string &text, const std::string &path)
{
    if (path.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw UsageError("cannot write " + path);
    }
    out << text;
}

std::string dump(const json &j)
{
    return j.dump(2) + "\n";
}

std::string fmt17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json reachability_json(const Reachability &r)
{
    json j = {{"reachable", r.reachable}, {"limit_only", r.limit_only}};
    j["witness"] = r.witness ? json(*r.witness) : json(nullptr);
    return j;
}

int cmd_classify(const ParamFlags &p)
{
    const auto r = resolve(p);
    json j;
    j["source"] = r.source;
    j["coeffs"] = r.coeffs;
    j["roots"] = r.roots;
    j["default_root_index"] = default_root_index(r.roots);
    j["selected_root_index"] = r.root_index;
    const bool heisenberg = r.coeffs.c22 == 0.0 && r.coeffs.c23 == Complex{} && r.coeffs.c33 == 0.0;
    j["heisenberg"] = heisenberg;
    if (r.coeffs.c22 == 0.0) {
        const double tau0 = tau0_phi(-r.coeffs.c23 / 2.0, -1.5 * r.coeffs.c33);
        j["tau0_branch_phi"] = tau0;
    }
    j["stanton"] = reachability_json(stanton_reachable(r.coeffs));
    emit(dump(j), "");
    return kExitOk;
}

int cmd_expand(const ParamFlags &p, const CommonFlags &c)
{
    const auto r = resolve(p);
    const auto surface = expand_surface(r.twist, c.cap);
    json j;
    j["source"] = r.source;
    j["input"] = r.input;
    j["twist"] = r.twist;
    j["root_index"] = r.root_index;
    j["cap"] = c.cap;
    j["coeffs"] = extract_coeffs(surface);
    j["series"] = series_to_json(surface.V);
    emit(dump(j), c.output);
    return kExitOk;
}

int cmd_sample(const ParamFlags &p, const CommonFlags &c, int radii, int angles, double radius)
{
    const auto r = resolve(p);
    SolveVOptions opts;
    std::ostringstream csv;
    json rows = json::array();
    csv << "re_z,im_z,v,status\n";
    bool failed = false;
    const auto add_row = [&](Complex z) {
        std::string status = "ok";
        double v = std::nan("");
        try {
            v = solve_v(r.twist, z, opts);
        } catch (const std::exception &e) {
            status = "failed";
            failed = true;
            std::cerr << "sample: " << e.what() << "\n";
        }
        csv << fmt17(z.real()) << ',' << fmt17(z.imag()) << ',' << fmt17(v) << ',' << status << '\n';
        rows.push_back({{"re_z", z.real()}, {"im_z", z.imag()}, {"v", status == "ok" ? json(v) : json(nullptr)},
                        {"status", status}});
    };
    add_row({0.0, 0.0});
    for (int i = 1; i <= radii; ++i) {
        const double rr = radius * i / radii;
        for (int k = 0; k < angles; ++k) {
            add_row(std::polar(rr, 2.0 * std::numbers::pi * k / angles));
        }
    }
    if (c.format == "csv") {
        emit(csv.str(), c.output);
    } else {
        emit(dump({{"twist", r.twist}, {"samples", rows}}), c.output);
    }
    return failed ? kExitVerifyFailed : kExitOk;
}

int cmd_normalize(const ParamFlags &p, const CommonFlags &c)
{
    const auto r = resolve(p);
    const auto d = normalization_ode_solve(r.coeffs, c.cap);
    const auto res = norm_residuals(d, r.coeffs);
    json j;
    j["coeffs"] = r.coeffs;
    j["cap"] = c.cap;
    j["alpha"] = series_to_json(d.alpha);
    j["p"] = series_to_json(d.p);
    j["h"] = series_to_json(d.h);
    j["q"] = series_to_json(d.q);
    j["residuals"] = {max_abs_coeff(res[0]), max_abs_coeff(res[1]), max_abs_coeff(res[2])};
    emit(dump(j), c.output);
    return kExitOk;
}

int cmd_verify_map(const ParamFlags &p, const CommonFlags &c, double tol)
{
    const auto r = resolve(p);
    json j;
    j["twist"] = r.twist;
    j["cap"] = c.cap;
    bool pass = true;
    const auto record = [&](const std::string &name, const MapJet &m, const VectorFieldParams &f) {
        const auto [r1, r2] = system_residual(m, f);
        const double e1 = max_abs_coeff(r1);
        const double e2 = max_abs_coeff(r2);
        // Relative to the largest jet coefficient.
        const double scale = std::max({1.0, max_abs_coeff(m.Z), max_abs_coeff(m.W)});
        pass = pass && e1 <= tol * scale && e2 <= tol * scale;
        j[name] = {{"Z_equation", e1}, {"W_equation", e2}, {"jet_scale", scale}};
    };
    record("twisted_map", twisted_map(r.twist, c.cap), twist_field(r.twist));
    if (r.stanton) {
        record("stanton_map", stanton_map(*r.stanton, c.cap), stanton_field(*r.stanton));
    }
    j["cubic_defect"] = r.twist.cubic_defect();
    j["tolerance"] = tol;
    j["pass"] = pass;
    emit(dump(j), c.output);
    return pass ? kExitOk : kExitVerifyFailed;
}

int cmd_verify_curvature(const std::string &input, const std::string &kind, const CommonFlags &c, double tol)
{
    MultiSeries s;
    try {
        s = series_from_json(read_json_file(input));
    } catch (const SeriesError &e) {
        throw UsageError(input + ": " + e.what());
    }
    CurvatureReport report;
    if (kind == "h") {
        report = curvature_residual(log_laplacian(s), tol);
    } else if (kind == "f") {
        report = curvature_residual(s, tol);
    } else {
        report = reduced_residual(s, tol);
    }
    if (report.cap < 0) {
        throw UsageError(input + ": cap " + std::to_string(s.cap()) + " is too small to determine any residual coefficient");
    }
    json j = report_to_json(report);
    j["kind"] = kind;
    emit(dump(j), c.output);
    return report.spherical ? kExitOk : kExitVerifyFailed;
}

int cmd_verify(const std::string &suite, const cli::SuiteOptions &opts, const CommonFlags &c)
{
    const auto checks = cli::run_suite(suite, opts);
    json list = json::array();
    bool pass = true;
    for (const auto &check : checks) {
        list.push_back(cli::to_json(check));
        pass = pass && check.pass;
        if (!check.pass) {
            std::cerr << "FAIL " << check.name << " max_residual=" << check.max_residual << "\n";
        }
    }
    const json j = {{"suite", suite}, {"seed", opts.seed}, {"cap", opts.cap}, {"checks", list}, {"pass", pass}};
    emit(dump(j), c.output);
    return pass ? kExitOk : kExitVerifyFailed;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Rigid sphere classification, expansion and verification"};
    app.require_subcommand(1);

    int cap = 10;
    try {
        cap = default_cap();
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    ParamFlags classify_p;
    auto *classify = app.add_subcommand("classify", "List twist parameter roots and Stanton reachability");
    add_param_flags(classify, classify_p);

    ParamFlags expand_p;
    CommonFlags expand_c{cap, "", "json"};
    auto *expand = app.add_subcommand("expand", "Expand the surface v = V(z, zbar) as a series");
    add_param_flags(expand, expand_p);
    add_common_flags(expand, expand_c, false);

    ParamFlags sample_p;
    CommonFlags sample_c{cap, "", "csv"};
    int radii = 3;
    int angles = 3;
    double radius = 0.3;
    auto *sample = app.add_subcommand("sample", "Sample v on a polar grid of z by Newton's method");
    add_param_flags(sample, sample_p);
    add_common_flags(sample, sample_c, true);
    sample->add_option("--radii", radii, "Number of radii")->check(CLI::Range(1, 1000));
    sample->add_option("--angles", angles, "Number of angles")->check(CLI::Range(1, 1000));
    sample->add_option("--radius", radius, "Largest |z|")->check(CLI::Range(0.0, 10.0));

    ParamFlags normalize_p;
    CommonFlags normalize_c{cap, "", "json"};
    auto *normalize = app.add_subcommand("normalize", "Solve the normalization equations as series");
    add_param_flags(normalize, normalize_p);
    add_common_flags(normalize, normalize_c, false);

    ParamFlags vmap_p;
    CommonFlags vmap_c{cap, "", "json"};
    double vmap_tol = 1e-9;
    auto *vmap = app.add_subcommand("verify-map", "Residuals of the flow system for the maps");
    add_param_flags(vmap, vmap_p);
    add_common_flags(vmap, vmap_c, false);
    vmap->add_option("--tol", vmap_tol, "Residual tolerance")->check(CLI::PositiveNumber);

    std::string vc_input;
    std::string vc_kind = "h";
    CommonFlags vc_c{cap, "", "json"};
    double vc_tol = 1e-9;
    auto *vcurv = app.add_subcommand("verify-curvature", "Zero-curvature residual of a series from a JSON file");
    vcurv->add_option("input", vc_input, "Series JSON file")->required()->check(CLI::ExistingFile);
    vcurv->add_option("--kind", vc_kind, "What the series is: h, f = log h_{z zbar}, or ftilde = f_zbar")
        ->check(CLI::IsMember({"h", "f", "ftilde"}));
    vcurv->add_option("--tol", vc_tol, "Base tolerance (scaled by 2^degree)")->check(CLI::PositiveNumber);
    vcurv->add_option("--output", vc_c.output, "Write the report to this file");

    std::string suite = "all";
    cli::SuiteOptions suite_opts;
    CommonFlags verify_c{cap, "", "json"};
    auto *verify = app.add_subcommand("verify", "Run a verification suite");
    verify->add_option("--suite", suite, "Suite to run")->check(CLI::IsMember(cli::suite_names()));
    verify->add_option("--seed", suite_opts.seed, "Random seed");
    verify->add_option("--perturb-phi", suite_opts.perturb_phi, "Offset of phi for the defect scaling check");
    verify->add_option("--tol", suite_opts.tolerance, "Base tolerance (scaled by 2^degree)")
        ->check(CLI::PositiveNumber);
    add_common_flags(verify, verify_c, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (classify->parsed()) {
            return cmd_classify(classify_p);
        }
        if (expand->parsed()) {
            return cmd_expand(expand_p, expand_c);
        }
        if (sample->parsed()) {
            return cmd_sample(sample_p, sample_c, radii, angles, radius);
        }
        if (normalize->parsed()) {
            return cmd_normalize(normalize_p, normalize_c);
        }
        if (vmap->parsed()) {
            return cmd_verify_map(vmap_p, vmap_c, vmap_tol);
        }
        if (vcurv->parsed()) {
            return cmd_verify_curvature(vc_input, vc_kind, vc_c, vc_tol);
        }
        if (verify->parsed()) {
            suite_opts.cap = verify_c.cap;
            return cmd_verify(suite, suite_opts, verify_c);
        }
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SeriesError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerifyFailed;
    }
    return kExitUsage;
}
