#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lasym/analysis.hpp"
#include "lasym/contour.hpp"
#include "lasym/error.hpp"
#include "lasym/extension.hpp"
#include "lasym/fields.hpp"
#include "lasym/flux.hpp"
#include "lasym/green.hpp"
#include "lasym/landau.hpp"
#include "lasym/parallel.hpp"
#include "lasym/pipeline.hpp"
#include "lasym/solver.hpp"
#include "verify_suites.hpp"

using nlohmann::json;
using namespace lasym;

namespace {

Vec3 parse_vec3(const std::string& s) {
    Vec3 v;
    char c1, c2;
    std::istringstream ss(s);
    if (!(ss >> v.x >> c1 >> v.y >> c2 >> v.z) || c1 != ',' || c2 != ',')
        throw ConfigError("expected a comma-separated triple, got '" + s + "'");
    return v;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

/// Load a JSON config and push values into CLI11 options that were not set
/// on the command line. Unknown keys are rejected.
void apply_config(CLI::App* cmd, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config JSON: ") + e.what());
    }
    if (!cfg.is_object()) throw ConfigError("config root must be a JSON object");
    for (const auto& [key, value] : cfg.items()) {
        CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (!opt) throw ConfigError("unknown config key: " + key);
        if (opt->count() > 0) continue;  // command line wins
        std::string text;
        if (value.is_string())
            text = value.get<std::string>();
        else if (value.is_array()) {
            std::string acc;
            for (const auto& e : value) {
                if (!acc.empty()) acc += ",";
                acc += e.dump();
            }
            text = acc;
        } else
            text = value.dump();
        opt->add_result(text);
        opt->run_callback();
    }
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << body;
}

void write_flow_csv(const std::string& path, const std::vector<Vec3>& pts,
                    const std::function<FlowSample(const Vec3&)>& eval) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << "x,y,z,ux,uy,uz,p\n";
    char buf[512];
    for (const Vec3& x : pts) {
        const FlowSample s = eval(x);
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", x.x,
                      x.y, x.z, s.velocity.x, s.velocity.y, s.velocity.z, s.pressure);
        out << buf;
    }
}

std::vector<Vec3> read_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open points file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty points file: " + path);
    std::vector<Vec3> pts;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        double c[3];
        for (int k = 0; k < 3; ++k) {
            if (!std::getline(ss, tok, ',')) throw ConfigError("short row in " + path);
            c[k] = std::stod(tok);
        }
        pts.push_back({c[0], c[1], c[2]});
    }
    return pts;
}

struct GridFlags {
    double r_min = 0.25;
    double r_max = 64.0;
    double q = 1.2;
    int n_theta = 24;
    int n_phi = 24;
    void attach(CLI::App* cmd) {
        cmd->add_option("--r-min", r_min, "innermost radius of the generated grid");
        cmd->add_option("--r-max", r_max, "outer radius of the generated grid");
        cmd->add_option("--q", q, "shell growth ratio");
        cmd->add_option("--n-theta", n_theta, "polar quadrature count");
        cmd->add_option("--n-phi", n_phi, "azimuthal count");
    }
    GridPtr build() const {
        return std::make_shared<GradedGrid>(make_graded_grid(r_min, r_max, q, n_theta, n_phi));
    }
};

json certificate_json(const SolveResult& res) {
    json j;
    j["eps_hat"] = res.certificate.eps_hat;
    j["c_hat"] = res.certificate.c_hat;
    j["y_norm"] = res.certificate.y_norm;
    j["discriminant"] = res.certificate.discriminant;
    j["xi1"] = res.certificate.xi1;
    j["xi2"] = res.certificate.xi2;
    j["valid"] = res.certificate.valid;
    j["converged"] = res.converged;
    j["iterations"] = res.iterations;
    j["final_step"] = res.final_step;
    j["norm_history"] = res.norm_history;
    j["truncation"] = {{"tail_bound", res.convolution_diag.tail_bound_max},
                       {"inner_bound", res.convolution_diag.inner_bound_max},
                       {"near_residual", res.convolution_diag.near_residual_max}};
    return j;
}

json fit_json(const DecayFit& f) {
    return {{"exponent", f.exponent}, {"log_prefactor", f.log_prefactor},
            {"r_lo", f.r_lo},         {"r_hi", f.r_hi},
            {"rms", f.rms_residual},  {"dropped_zeros", f.dropped_zeros}};
}

json report_json(const AsymptoticsReport& rep) {
    json j;
    j["b"] = vec_json(rep.b);
    j["alpha"] = rep.alpha;
    j["remainder_norm"] = rep.remainder_norm;
    j["pressure_offset"] = rep.pressure_offset;
    j["pressure_remainder_norm"] = rep.pressure_remainder_norm;
    j["velocity_fit"] = fit_json(rep.velocity_fit);
    j["pressure_fit"] = fit_json(rep.pressure_fit);
    j["velocity_certified"] = rep.velocity_certified;
    j["asymptotics_mismatch"] = rep.asymptotics_mismatch;
    return j;
}

// --- subcommand bodies ------------------------------------------------------

struct GlobalFlags {
    std::string config_path;
    std::string out_dir = ".";
    int threads = 0;
    std::uint64_t seed = 2024;
};

int cmd_beta(double A) {
    json j;
    j["A"] = A;
    j["beta"] = landau_beta(A);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_gamma(double beta_val) {
    json j;
    j["beta"] = beta_val;
    j["A"] = landau_gamma(beta_val);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_landau(const GlobalFlags& g, const std::string& b_str, double A,
               const std::string& points_path, const GridFlags& gf, double reg_r0,
               const std::string& output) {
    LandauParams params;
    if (!b_str.empty()) {
        params = LandauParams::from_force(parse_vec3(b_str));
    } else {
        if (!(A > 1.0)) throw ConfigError("A must exceed 1");
        params = LandauParams::from_parameter(A);
    }

    std::vector<Vec3> pts;
    if (!points_path.empty()) {
        pts = read_points_csv(points_path);
    } else {
        GridPtr grid = gf.build();
        pts.resize(grid->node_count());
        for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = grid->point(i);
    }

    std::function<FlowSample(const Vec3&)> eval;
    if (reg_r0 > 0.0) {
        const RegularizationProfile prof(reg_r0);
        eval = [params, prof](const Vec3& x) { return regularized_landau(params, prof, x); };
    } else {
        eval = [params](const Vec3& x) {
            return params.is_zero() ? FlowSample{} : eval_landau(params, x);
        };
    }
    const auto path = std::filesystem::path(g.out_dir) / output;
    write_flow_csv(path.string(), pts, eval);
    std::cout << "wrote " << path.string() << " (" << pts.size() << " rows)\n";
    return 0;
}

int cmd_force(const GlobalFlags& g, const std::string& builtin, const std::string& b_str,
              double A, double phi_flux, const std::string& field_path,
              const std::string& radii_str, int order) {
    const auto radii = parse_list(radii_str);
    if (radii.empty()) throw ConfigError("force: need a radius list");

    FlowEvaluators flow;
    FlowSnapshot snap;
    if (!field_path.empty()) {
        snap = read_flow_csv(field_path);
        if (!snap.has_pressure)
            throw ConfigError("force: CSV field source needs the 7-column layout with p");
        auto vel = std::make_shared<SampledVectorField>(snap.velocity);
        auto prs = std::make_shared<SampledScalarField>(snap.pressure);
        flow.velocity = [vel](const Vec3& x) { return vel->value(x); };
        flow.pressure = [prs](const Vec3& x) { return prs->value(x); };
        flow.fd_step_scale = 5e-3;
    } else if (builtin == "landau") {
        const LandauParams params = !b_str.empty()
                                        ? LandauParams::from_force(parse_vec3(b_str))
                                        : LandauParams::from_parameter(A);
        flow.velocity = [params](const Vec3& x) { return eval_landau(params, x).velocity; };
        flow.pressure = [params](const Vec3& x) { return eval_landau(params, x).pressure; };
        flow.velocity_gradient = [params](const Vec3& x) {
            return eval_landau_gradient(params, x);
        };
    } else if (builtin == "stokeslet") {
        flow.velocity = [](const Vec3& x) { return stokeslet_velocity(x); };
        flow.pressure = [](const Vec3& x) { return stokeslet_pressure(x); };
    } else if (builtin == "outflow") {
        const OutflowField a = canonical_outflow_field(phi_flux);
        flow.velocity = [a](const Vec3& x) { return a.velocity(x); };
        flow.pressure = [a](const Vec3& x) { return a.pressure(x); };
        flow.velocity_gradient = [a](const Vec3& x) { return a.velocity_gradient(x); };
    } else {
        throw ConfigError("force: unknown built-in '" + builtin + "'");
    }

    json j;
    j["radii"] = radii;
    json forces = json::array();
    Vec3 first{};
    double spread = 0.0;
    std::vector<Vec3> values;
    for (double R : radii) {
        const auto fi = net_force_checked(flow, R, order);
        values.push_back(fi.value);
        forces.push_back({{"R", R},
                          {"force", vec_json(fi.value)},
                          {"quadrature_error", fi.quadrature_error}});
    }
    first = values.front();
    for (const Vec3& v : values) spread = std::max(spread, norm(v - first));
    j["forces"] = forces;
    j["max_pairwise_deviation"] = spread;
    j["outflow"] = outflow(flow.velocity, radii.front(), order);
    const auto path = std::filesystem::path(g.out_dir) / "force.json";
    write_text(path.string(), j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_solve(const GlobalFlags& g, const std::string& scenario, const std::string& b_str,
              double alpha, double perturb, PipelineConfig cfg) {
    cfg.alpha = alpha;
    cfg.solver.seed = g.seed;
    const Vec3 b = b_str.empty() ? Vec3{} : parse_vec3(b_str);

    PipelineResult result;
    if (scenario == "landau-exterior") {
        ExteriorSolutionSample sol;
        sol.R0 = cfg.R0;
        sol.C_star = std::max(norm(b), 1e-6);
        const LandauParams params = LandauParams::from_force(b);
        sol.velocity = [params](const Vec3& x) { return eval_landau(params, x).velocity; };
        sol.pressure = [params](const Vec3& x) { return eval_landau(params, x).pressure; };
        sol.velocity_gradient = [params](const Vec3& x) {
            return eval_landau_gradient(params, x);
        };
        result = run_exterior_pipeline(sol, cfg);
    } else if (scenario == "direct") {
        result = run_forced_pipeline(b, perturb, cfg);
    } else if (scenario == "dipole") {
        result = run_forced_pipeline(Vec3{}, perturb == 0.0 ? 0.5 : perturb, cfg);
    } else {
        throw ConfigError("solve: unknown scenario '" + scenario + "'");
    }

    const std::filesystem::path out(g.out_dir);
    write_vector_csv((out / "v.csv").string(), result.solve.v);
    write_scalar_csv((out / "q.csv").string(), result.solve.q);
    write_text((out / "certificate.json").string(), certificate_json(result.solve).dump(2) + "\n");
    json rep = report_json(result.report);
    rep["b_volume"] = vec_json(result.b_volume);
    rep["b_surface"] = vec_json(result.b_surface);
    rep["outflow"] = result.outflow;
    write_text((out / "report.json").string(), rep.dump(2) + "\n");
    std::cout << rep.dump(2) << "\n";
    return 0;
}

int cmd_stream(const GlobalFlags& g, double A, double eps, bool stokeslet,
               const std::string& levels_str, double r_min, double r_max, int nr, int nth,
               const std::string& output) {
    const auto levels = parse_list(levels_str);
    if (levels.empty()) throw ConfigError("stream: need a non-empty level list");
    const int given = (A > 0) + (eps > 0) + (stokeslet ? 1 : 0);
    if (given != 1) throw ConfigError("stream: give exactly one of --A, --eps, --stokeslet");

    std::function<double(double, double)> psi;
    if (stokeslet) {
        psi = [](double r, double th) {
            const double s = std::sin(th);
            return r * s * s / (8.0 * M_PI);
        };
    } else if (eps > 0) {
        const double Aeps = landau_gamma(eps);
        psi = [eps, Aeps](double r, double th) {
            const double s = std::sin(th);
            return r * s * s / (eps * Aeps - eps * std::cos(th));
        };
    } else {
        if (!(A > 1.0)) throw ConfigError("stream: A must exceed 1");
        psi = [A](double r, double th) { return landau_stream(A, r, th); };
    }

    std::vector<double> rs(nr), ths(nth);
    for (int i = 0; i < nr; ++i) rs[i] = r_min + (r_max - r_min) * i / (nr - 1.0);
    for (int j = 0; j < nth; ++j) ths[j] = 0.02 + (M_PI - 0.04) * j / (nth - 1.0);
    const auto sets = contour_levels(psi, rs, ths, levels, 1e-4);
    const auto path = std::filesystem::path(g.out_dir) / output;
    write_text(path.string(), contours_to_svg(sets));
    std::size_t nlines = 0;
    for (const auto& s : sets) nlines += s.lines.size();
    std::cout << "wrote " << path.string() << " (" << sets.size() << " levels, " << nlines
              << " polylines)\n";
    return 0;
}

int cmd_verify(const GlobalFlags& g, const std::string& suite) {
    if (!cli::suite_exists(suite)) throw ConfigError("verify: unknown suite '" + suite + "'");
    const auto checks = cli::run_suite(suite, g.seed);
    json j;
    j["suite"] = suite;
    json arr = json::array();
    bool all = true;
    for (const auto& c : checks) {
        arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        all = all && c.pass;
    }
    j["checks"] = arr;
    j["pass"] = all;
    std::cout << j.dump(2) << "\n";
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady 3D exterior-flow jet asymptotics: closed-form jet solutions, "
                 "surface-flux forces, and the certified perturbation solver"};
    app.require_subcommand(1);

    GlobalFlags g;
    app.add_option("--config", g.config_path, "JSON config; command-line flags win");
    app.add_option("--out", g.out_dir, "output directory")->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads (0 = hardware)");
    app.add_option("--seed", g.seed, "seed for randomized probes")->capture_default_str();

    // beta
    auto* beta_cmd = app.add_subcommand("beta", "force magnitude of the jet with parameter A");
    double beta_A = 2.0;
    beta_cmd->add_option("--A", beta_A, "jet shape parameter (> 1)")->required();

    // gamma
    auto* gamma_cmd = app.add_subcommand("gamma", "invert the force magnitude to A");
    double gamma_val = 1.0;
    gamma_cmd->add_option("--beta", gamma_val, "force magnitude (> 0)")->required();

    // landau
    auto* landau_cmd = app.add_subcommand("landau", "evaluate the jet on points or a grid");
    std::string landau_b, landau_points, landau_out = "landau.csv";
    double landau_A = 0.0, landau_reg = 0.0;
    GridFlags landau_grid;
    landau_cmd->add_option("--b", landau_b, "force vector bx,by,bz");
    landau_cmd->add_option("--A", landau_A, "jet shape parameter (> 1)");
    landau_cmd->add_option("--points", landau_points, "CSV of x,y,z evaluation points");
    landau_cmd->add_option("--regularized", landau_reg, "emit the r0-regularized fields");
    landau_cmd->add_option("--output", landau_out, "output CSV name")->capture_default_str();
    landau_grid.attach(landau_cmd);

    // force
    auto* force_cmd = app.add_subcommand("force", "momentum flux through spheres");
    std::string force_builtin = "landau", force_b, force_field, force_radii;
    double force_A = 2.0, force_phi = 1.0;
    int force_order = 16;
    force_cmd->add_option("--builtin", force_builtin, "landau | stokeslet | outflow")
        ->capture_default_str();
    force_cmd->add_option("--b", force_b, "force vector for the built-in jet");
    force_cmd->add_option("--A", force_A, "jet parameter for the built-in jet");
    force_cmd->add_option("--phi", force_phi, "flux of the built-in outflow field");
    force_cmd->add_option("--field", force_field, "CSV flow snapshot (x,y,z,ux,uy,uz,p)");
    force_cmd->add_option("--radii", force_radii, "comma-separated sphere radii")->required();
    force_cmd->add_option("--order", force_order, "angular quadrature order")
        ->capture_default_str();

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "perturbation solve with certificate");
    std::string solve_scenario = "landau-exterior", solve_b = "0,0,0.1";
    double solve_alpha = 1.5, solve_perturb = 0.0;
    PipelineConfig pcfg;
    solve_cmd->add_option("--scenario", solve_scenario, "landau-exterior | direct | dipole")
        ->capture_default_str();
    solve_cmd->add_option("--b", solve_b, "prescribed force vector")->capture_default_str();
    solve_cmd->add_option("--alpha", solve_alpha, "decay exponent in (1,2)")
        ->capture_default_str();
    solve_cmd->add_option("--perturb", solve_perturb, "strength of the dipole perturbation");
    solve_cmd->add_option("--r0", pcfg.r0, "regularization radius")->capture_default_str();
    solve_cmd->add_option("--R0", pcfg.R0, "exterior ball radius")->capture_default_str();
    solve_cmd->add_option("--grid-r-min", pcfg.grid_r_min, "solver grid inner radius")
        ->capture_default_str();
    solve_cmd->add_option("--grid-r-max", pcfg.grid_r_max, "solver grid outer radius")
        ->capture_default_str();
    solve_cmd->add_option("--grid-shells", pcfg.grid_shells, "solver grid shell count")
        ->capture_default_str();
    solve_cmd->add_option("--grid-n-theta", pcfg.n_theta, "solver grid polar count")
        ->capture_default_str();
    solve_cmd->add_option("--grid-n-phi", pcfg.n_phi, "solver grid azimuthal count")
        ->capture_default_str();
    solve_cmd->add_option("--max-iter", pcfg.solver.max_iter, "iteration cap")
        ->capture_default_str();
    solve_cmd->add_option("--tol", pcfg.solver.step_tol, "step tolerance in the decay norm")
        ->capture_default_str();

    // stream
    auto* stream_cmd = app.add_subcommand("stream", "meridian streamline contours as SVG");
    double stream_A = 0.0, stream_eps = 0.0, stream_rmin = 0.05, stream_rmax = 6.0;
    bool stream_stokeslet = false;
    int stream_nr = 160, stream_nth = 160;
    std::string stream_levels, stream_out = "stream.svg";
    stream_cmd->add_option("--A", stream_A, "jet parameter");
    stream_cmd->add_option("--eps", stream_eps, "Reynolds-family parameter");
    stream_cmd->add_flag("--stokeslet", stream_stokeslet, "plot the point-force stream");
    stream_cmd->add_option("--levels", stream_levels, "comma-separated contour levels")
        ->required();
    stream_cmd->add_option("--plot-r-min", stream_rmin, "plot window inner radius")
        ->capture_default_str();
    stream_cmd->add_option("--plot-r-max", stream_rmax, "plot window outer radius")
        ->capture_default_str();
    stream_cmd->add_option("--plot-nr", stream_nr, "radial sample count")
        ->capture_default_str();
    stream_cmd->add_option("--plot-ntheta", stream_nth, "polar sample count")
        ->capture_default_str();
    stream_cmd->add_option("--output", stream_out, "output SVG name")->capture_default_str();

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run an invariant battery");
    std::string verify_suite;
    verify_cmd
        ->add_option("--suite", verify_suite,
                     "landau | green | flux | solver | counterexample | all")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!g.config_path.empty()) {
            for (CLI::App* cmd : app.get_subcommands()) apply_config(cmd, g.config_path);
        }
        if (g.threads == 0) {
            if (const char* env = std::getenv("LANDAU_ASYM_THREADS")) g.threads = std::atoi(env);
        }
        set_thread_count(g.threads);
        std::filesystem::create_directories(g.out_dir);

        if (app.got_subcommand(beta_cmd)) return cmd_beta(beta_A);
        if (app.got_subcommand(gamma_cmd)) return cmd_gamma(gamma_val);
        if (app.got_subcommand(landau_cmd))
            return cmd_landau(g, landau_b, landau_A, landau_points, landau_grid, landau_reg,
                              landau_out);
        if (app.got_subcommand(force_cmd))
            return cmd_force(g, force_builtin, force_b, force_A, force_phi, force_field,
                             force_radii, force_order);
        if (app.got_subcommand(solve_cmd))
            return cmd_solve(g, solve_scenario, solve_b, solve_alpha, solve_perturb, pcfg);
        if (app.got_subcommand(stream_cmd))
            return cmd_stream(g, stream_A, stream_eps, stream_stokeslet, stream_levels,
                              stream_rmin, stream_rmax, stream_nr, stream_nth, stream_out);
        if (app.got_subcommand(verify_cmd)) return cmd_verify(g, verify_suite);
        std::cerr << "no subcommand given\n";
        return 2;
    } catch (const NoCertificateError& e) {
        json j;
        j["error"] = "no-certificate";
        j["message"] = e.what();
        j["eps_hat"] = e.eps_hat;
        j["c_hat"] = e.c_hat;
        j["y_norm"] = e.y_norm;
        std::cerr << j.dump(2) << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.exit_code);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
