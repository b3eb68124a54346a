// End-to-end checks of the command-line tool: spawns the built binary.
// Usage: cli_tests <path-to-landau-asym>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "lasym/fields.hpp"
#include "lasym/flux.hpp"
#include "lasym/landau.hpp"

using nlohmann::json;
using namespace lasym;
namespace fs = std::filesystem;

namespace {

std::string g_binary;
fs::path g_dir;
int g_failures = 0;

void expect(bool ok, const std::string& what) {
    if (!ok) {
        ++g_failures;
        std::cerr << "FAIL: " << what << "\n";
    } else {
        std::cout << "ok: " << what << "\n";
    }
}

int run(const std::string& args) {
    const std::string cmd = g_binary + " " + args + " > " + (g_dir / "stdout.txt").string() +
                            " 2> " + (g_dir / "stderr.txt").string();
    const int raw = std::system(cmd.c_str());
    return WEXITSTATUS(raw);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_tests <binary>\n";
        return 1;
    }
    g_binary = argv[1];
    g_dir = fs::temp_directory_path() / "lasym_cli_tests";
    fs::create_directories(g_dir);
    const std::string out = " --out " + (g_dir / "out").string();

    // exit-code contract on configuration errors
    expect(run("beta --A 2") == 0, "beta succeeds");
    expect(run("beta --A 0.5") == 2, "beta rejects A <= 1 with exit 2");
    expect(run("gamma --beta -1") == 2, "gamma rejects beta <= 0 with exit 2");
    expect(run("landau --A 0.5" + out) == 2, "landau rejects A <= 1 with exit 2");
    expect(run("force --builtin landau --A 2") == 2, "force without radii exits 2");
    expect(run("verify --suite bogus") == 2, "unknown verify suite exits 2");
    expect(run("stream --A 2 --levels ''" + out) == 2, "empty level list exits 2");

    // beta value on stdout
    {
        expect(run("beta --A 2") == 0, "beta runs");
        const auto j = json::parse(slurp(g_dir / "stdout.txt"));
        expect(std::abs(j["beta"].get<double>() - landau_beta(2.0)) < 1e-12,
               "beta prints the closed-form value");
    }

    // zero-force jet gives an all-zero CSV
    {
        expect(run("landau --b 0,0,0 --r-min 0.5 --r-max 2 --q 1.5 --n-theta 4 --n-phi 4" +
                   out) == 0,
               "landau --b 0,0,0 runs");
        const auto snap = read_flow_csv((g_dir / "out" / "landau.csv").string());
        expect(snap.velocity.max_magnitude() == 0.0, "zero force gives the zero field");
    }

    // points file path and polar consistency
    {
        const fs::path ring = g_dir / "ring.csv";
        std::ofstream r(ring);
        r << "x,y,z\n";
        for (int k = 0; k < 8; ++k) {
            const double th = M_PI * (k + 0.5) / 8;
            r << std::sin(th) << ",0," << std::cos(th) << "\n";
        }
        r.close();
        expect(run("landau --A 2 --points " + ring.string() + " --output ring_out.csv" + out) ==
                   0,
               "landau --points runs");
        std::ifstream in(g_dir / "out" / "ring_out.csv");
        std::string line;
        std::getline(in, line);
        expect(line == "x,y,z,ux,uy,uz,p", "flow CSV header");
        int rows = 0;
        double worst = 1e300;
        while (std::getline(in, line)) {
            std::stringstream ss(line);
            std::string tok;
            double c[7];
            for (double& v : c) {
                std::getline(ss, tok, ',');
                v = std::stod(tok);
            }
            const Vec3 x{c[0], c[1], c[2]};
            const auto sp = to_spherical(x);
            const auto pol = eval_landau_polar(2.0, sp.r, sp.theta);
            const Vec3 expected = pol.u_r * radial_unit(sp.theta, sp.phi) +
                                  pol.u_theta * polar_unit(sp.theta, sp.phi);
            worst = std::min(worst, -norm(Vec3{c[3], c[4], c[5]} - expected));
            ++rows;
        }
        expect(rows == 8, "one row per point");
        expect(-worst < 1e-12, "rows match the polar closed form");
    }

    // determinism: identical invocations give byte-identical output
    {
        expect(run("landau --A 2 --r-min 0.5 --r-max 8 --q 1.4 --n-theta 6 --n-phi 6 "
                   "--output det1.csv" + out) == 0,
               "deterministic run 1");
        expect(run("landau --A 2 --r-min 0.5 --r-max 8 --q 1.4 --n-theta 6 --n-phi 6 "
                   "--output det2.csv" + out) == 0,
               "deterministic run 2");
        expect(slurp(g_dir / "out" / "det1.csv") == slurp(g_dir / "out" / "det2.csv"),
               "byte-identical CSV across runs");
    }

    // force on the built-in jet: value and R independence
    {
        expect(run("force --builtin landau --A 2 --radii 1,2,5" + out) == 0, "force runs");
        const auto j = json::parse(slurp(g_dir / "out" / "force.json"));
        expect(j["forces"].size() == 3, "three radii reported");
        const double fz = j["forces"][0]["force"][2].get<double>();
        expect(std::abs(fz - landau_beta(2.0)) < 1e-3 * landau_beta(2.0),
               "force magnitude matches beta(2)");
        expect(j["max_pairwise_deviation"].get<double>() < 1e-6, "R-independence within 1e-6");
    }

    // outflow built-in: unit flux
    {
        expect(run("force --builtin outflow --phi 1 --radii 1,3" + out) == 0,
               "outflow force runs");
        const auto j = json::parse(slurp(g_dir / "out" / "force.json"));
        expect(std::abs(j["outflow"].get<double>() - 1.0) < 1e-10, "flux printed as 1.0");
    }

    // CSV round trip: emitted jet snapshot re-ingested as a force source
    {
        expect(run("landau --A 2 --r-min 0.4 --r-max 40 --q 1.17 --n-theta 24 --n-phi 16 "
                   "--output jet.csv" + out) == 0,
               "emit jet snapshot");
        expect(run("force --field " + (g_dir / "out" / "jet.csv").string() +
                   " --radii 2,4 --order 12" + out) == 0,
               "force from CSV runs");
        const auto j = json::parse(slurp(g_dir / "out" / "force.json"));
        const double fz = j["forces"][0]["force"][2].get<double>();
        expect(std::abs(fz - landau_beta(2.0)) <= 5e-3 * landau_beta(2.0),
               "round-trip force within 5e-3 relative");
    }

    // stream contours
    {
        expect(run("stream --A 2 --levels 0.5,1,2 --output s.svg" + out) == 0, "stream runs");
        const std::string svg = slurp(g_dir / "out" / "s.svg");
        expect(svg.find("<svg") != std::string::npos, "SVG emitted");
        int groups = 0;
        for (std::size_t p = svg.find("<g "); p != std::string::npos; p = svg.find("<g ", p + 1))
            ++groups;
        expect(groups == 3, "one group per level");
        expect(run("stream --stokeslet --levels 0.02,0.05 --plot-r-max 4 --output s2.svg" +
                   out) == 0,
               "stokeslet stream runs");
    }

    // malformed config JSON exits 2; valid config fills defaults
    {
        const fs::path bad = g_dir / "bad.json";
        std::ofstream(bad) << "{ not json";
        expect(run("--config " + bad.string() + " beta --A 2") == 2,
               "malformed config exits 2");
        const fs::path unknown = g_dir / "unknown.json";
        std::ofstream(unknown) << R"({"no-such-key": 1})";
        expect(run("--config " + unknown.string() + " beta --A 2") == 2,
               "unknown config key exits 2");
        const fs::path good = g_dir / "good.json";
        std::ofstream(good) << R"({"radii": "1,2", "A": 2})";
        expect(run("--config " + good.string() + " force --builtin landau") == 0,
               "config supplies required options");
    }

    // solve: small dipole scenario end to end
    {
        expect(run("solve --scenario dipole --perturb 0.4 --alpha 1.5 --grid-shells 12 "
                   "--grid-n-theta 8 --grid-n-phi 8 --grid-r-max 60" + out) == 0,
               "dipole solve exits 0");
        const auto cert = json::parse(slurp(g_dir / "out" / "certificate.json"));
        expect(cert["valid"].get<bool>(), "certificate emitted and valid");
        expect(cert["converged"].get<bool>(), "solve converged");
        const auto rep = json::parse(slurp(g_dir / "out" / "report.json"));
        expect(rep["velocity_fit"]["exponent"].get<double>() >= 1.4,
               "report decay exponent >= alpha - 0.1");
        expect(fs::exists(g_dir / "out" / "v.csv") && fs::exists(g_dir / "out" / "q.csv"),
               "field CSVs written");
    }

    // solve: oversized force refuses with exit 3
    {
        const int code = run("solve --scenario landau-exterior --b 0,0,100 --grid-shells 12 "
                             "--grid-n-theta 8 --grid-n-phi 8 --grid-r-max 60" + out);
        expect(code == 3, "|b| = 100 exits with the no-certificate code 3");
        const std::string err = slurp(g_dir / "stderr.txt");
        expect(err.find("eps_hat") != std::string::npos,
               "refusal reports the measured bounds");
    }

    if (g_failures) std::cerr << g_failures << " CLI check(s) failed\n";
    return g_failures;
}
