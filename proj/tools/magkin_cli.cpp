// magkin command-line tool: magnetic kinetic-energy densities of homogeneous
// electron gases, Fermi levels, parameter sweeps, the verification batteries,
// and the reduced 1d variational solver.
//
// Exit codes: 0 ok, 2 domain error (bad parameter), 3 solver did not converge.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "magkin/density_matrix.hpp"
#include "magkin/kinetic2d.hpp"
#include "magkin/kinetic3d.hpp"
#include "magkin/reduce1d.hpp"
#include "magkin/verify.hpp"
#include "magkin/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 2;
constexpr int kExitNoConvergence = 3;

/// 12 significant digits, '.' decimal separator, locale-independent.
std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

struct ScanArgs {
    std::string param = "b";
    double from = 0.0;
    double to = 0.0;
    std::size_t steps = 2;
    std::string scale = "linear";
    double fixed_b = 1.0;
    double fixed_rho = 1.0;
    std::string out;
};

int run_scan(const ScanArgs& args) {
    if (args.param != "b" && args.param != "rho")
        throw std::domain_error("scan: --param must be 'b' or 'rho'");
    if (!(args.from < args.to)) throw std::domain_error("scan: needs --from < --to");
    if (args.steps < 2) throw std::domain_error("scan: needs --steps >= 2");
    if (args.scale != "linear" && args.scale != "log")
        throw std::domain_error("scan: --scale must be 'linear' or 'log'");
    if (args.scale == "log" && !(args.from > 0.0))
        throw std::domain_error("scan: log scale needs --from > 0");

    std::ostringstream os;
    os << "# magkin " << magkin::version << " scan\n";
    os << "# param=" << args.param << " from=" << fmt(args.from) << " to=" << fmt(args.to)
       << " steps=" << args.steps << " scale=" << args.scale;
    if (args.param == "b")
        os << " rho=" << fmt(args.fixed_rho);
    else
        os << " b=" << fmt(args.fixed_b);
    os << "\n# methods: omega2d=closed-form omega3d=canonical(proof-form)\n";
    os << args.param << ",omega2d,omega3d_canonical,delta,occupied_levels\n";

    for (std::size_t i = 0; i < args.steps; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(args.steps - 1);
        const double value = args.scale == "linear"
                                 ? args.from + (args.to - args.from) * s
                                 : args.from * std::pow(args.to / args.from, s);
        const double b = args.param == "b" ? value : args.fixed_b;
        const double rho = args.param == "rho" ? value : args.fixed_rho;
        if (!(b > 0.0)) throw std::domain_error("scan: parameter b must stay > 0");
        if (!(rho >= 0.0)) throw std::domain_error("scan: parameter rho must stay >= 0");
        const auto w2 = magkin::omega2d(b, rho);
        const auto w3 = magkin::omega3d(b, rho);
        os << fmt(value) << ',' << fmt(w2.omega) << ',' << fmt(w3.omega) << ','
           << fmt(w3.fermi.delta) << ',' << w3.fermi.occupied_levels << '\n';
    }

    if (args.out.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream file(args.out, std::ios::binary);
        if (!file) throw std::runtime_error("scan: cannot open output file " + args.out);
        file << os.str();
    }
    return kExitOk;
}

struct DensityFile {
    magkin::GridSpec grid{1.0, 2};
    std::vector<double> rho;
};

DensityFile read_density_csv(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::domain_error("reduce1d: cannot open density file " + path);
    std::string line;
    if (!std::getline(file, line))
        throw std::domain_error("reduce1d: density file is empty (header line required)");
    // Header line required: a data-looking first line means it is missing.
    {
        double a = 0.0, b = 0.0;
        if (std::sscanf(line.c_str(), "%lf,%lf", &a, &b) == 2)
            throw std::domain_error(
                "reduce1d: density file must start with a header line (e.g. 'x,rho')");
    }
    std::vector<double> xs, rhos;
    while (std::getline(file, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::domain_error("reduce1d: malformed density row '" + line + "'");
        xs.push_back(std::stod(line.substr(0, comma)));
        rhos.push_back(std::stod(line.substr(comma + 1)));
    }
    if (xs.size() < 2) throw std::domain_error("reduce1d: density file needs at least 2 rows");
    const double h = xs[1] - xs[0];
    if (!(h > 0.0)) throw std::domain_error("reduce1d: x column must be increasing");
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (std::abs(xs[i] - xs[i - 1] - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw std::domain_error("reduce1d: x column must be uniformly spaced");
    }
    for (double r : rhos)
        if (!(r >= 0.0)) throw std::domain_error("reduce1d: density must be >= 0");
    DensityFile out;
    out.grid = magkin::GridSpec(h * static_cast<double>(xs.size()), xs.size());
    out.rho = std::move(rhos);
    return out;
}

int run_reduce1d(const std::string& density_path, double b3, double b2, const std::string& bc_name,
                 const std::string& algorithm, const std::string& out_path,
                 const std::string& density_out_path, magkin::MinimizeOptions opts) {
    if (!(b3 > 0.0)) throw std::domain_error("reduce1d: --b3 must be > 0");
    if (algorithm == "admm")
        opts.algorithm = magkin::MinimizeAlgorithm::admm;
    else if (algorithm == "subgradient")
        opts.algorithm = magkin::MinimizeAlgorithm::subgradient;
    else
        throw std::domain_error("reduce1d: --algorithm must be 'admm' or 'subgradient'");
    magkin::BoundaryCondition bc;
    if (bc_name == "dirichlet")
        bc = magkin::BoundaryCondition::dirichlet;
    else if (bc_name == "periodic")
        bc = magkin::BoundaryCondition::periodic;
    else
        throw std::domain_error("reduce1d: --bc must be 'dirichlet' or 'periodic'");

    const DensityFile density = read_density_csv(density_path);
    const magkin::MagneticField field(0.0, b2, b3);
    const auto result =
        magkin::minimize_reduced_energy(density.rho, density.grid, field, bc, opts);

    std::cout << "energy.kinetic  = " << fmt(result.energy.kinetic) << "\n";
    std::cout << "energy.spectral = " << fmt(result.energy.spectral) << "\n";
    std::cout << "energy.total    = " << fmt(result.energy.total) << "\n";
    std::cout << "constraint_violation = " << fmt(result.energy.constraint_violation) << "\n";
    std::cout << "iterations = " << result.report.iterations
              << "  converged = " << (result.report.converged ? "true" : "false") << "\n";

    if (!out_path.empty()) {
        nlohmann::json j;
        j["tool"] = "magkin";
        j["version"] = magkin::version;
        j["params"] = {{"density", density_path}, {"b3", b3},      {"b2", b2},
                       {"bc", bc_name},           {"n", density.grid.n},
                       {"length", density.grid.length}};
        j["energy"] = {{"kinetic", result.energy.kinetic},
                       {"spectral", result.energy.spectral},
                       {"total", result.energy.total}};
        const Eigen::VectorXd mu = result.state.eigenvalues();
        std::vector<double> mu_desc(mu.data(), mu.data() + mu.size());
        std::reverse(mu_desc.begin(), mu_desc.end());
        j["mu"] = mu_desc;
        j["constraint_violation"] = result.energy.constraint_violation;
        j["iterations"] = result.report.iterations;
        j["converged"] = result.report.converged;
        std::ofstream file(out_path, std::ios::binary);
        if (!file) throw std::runtime_error("reduce1d: cannot open output file " + out_path);
        file << j.dump(2) << "\n";
    }
    if (!density_out_path.empty()) {
        std::ofstream file(density_out_path, std::ios::binary);
        if (!file)
            throw std::runtime_error("reduce1d: cannot open output file " + density_out_path);
        file << "x,rho\n";
        const Eigen::VectorXd rho_g = result.state.density();
        for (std::size_t i = 0; i < density.grid.n; ++i)
            file << fmt(density.grid.node(i)) << ',' << fmt(rho_g[static_cast<Eigen::Index>(i)])
                 << '\n';
    }
    return result.report.converged ? kExitOk : kExitNoConvergence;
}

int run_verify(const std::string& suite, std::uint64_t seed) {
    std::vector<magkin::PropertyResult> results;
    if (suite == "kinetic" || suite == "all") {
        const auto r = magkin::verify_kinetic(seed);
        results.insert(results.end(), r.begin(), r.end());
    }
    if (suite == "wigner" || suite == "all") {
        const auto r = magkin::verify_wigner(seed);
        results.insert(results.end(), r.begin(), r.end());
    }
    if (results.empty())
        throw std::domain_error("verify: --suite must be 'wigner', 'kinetic' or 'all'");

    bool all_pass = true;
    for (const auto& r : results) {
        std::printf("%-60s  max dev %-12.3e tol %-9.0e %s\n", r.name.c_str(), r.max_deviation,
                    r.tolerance, r.pass ? "PASS" : "FAIL");
        all_pass = all_pass && r.pass;
    }
    std::printf("%zu properties, %s\n", results.size(), all_pass ? "all pass" : "FAILURES");
    return all_pass ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"magnetic kinetic-energy densities of homogeneous electron gases"};
    app.require_subcommand(1);

    // omega2d
    double o2_b = 1.0, o2_rho = 1.0;
    bool o2_oracle = false;
    auto* omega2d_cmd = app.add_subcommand("omega2d", "2d kinetic energy density");
    omega2d_cmd->add_option("--b", o2_b, "field strength (> 0)")->required();
    omega2d_cmd->add_option("--rho", o2_rho, "surface density (>= 0)")->required();
    omega2d_cmd->add_flag("--oracle", o2_oracle, "also print the bathtub-sum value");

    // omega3d
    double o3_b = 1.0, o3_rho = 1.0;
    std::string o3_method = "canonical";
    auto* omega3d_cmd = app.add_subcommand("omega3d", "3d kinetic energy density");
    omega3d_cmd->add_option("--b", o3_b, "field strength (> 0)")->required();
    omega3d_cmd->add_option("--rho", o3_rho, "volume density (>= 0)")->required();
    omega3d_cmd->add_option("--method", o3_method, "oracle|prop|proof|canonical");

    // fermi
    double fermi_b = 1.0, fermi_rho = 1.0, fermi_tol = 1e-12;
    auto* fermi_cmd = app.add_subcommand("fermi", "Fermi level delta(b, rho)");
    fermi_cmd->add_option("--b", fermi_b, "field strength (> 0)")->required();
    fermi_cmd->add_option("--rho", fermi_rho, "volume density (>= 0)")->required();
    fermi_cmd->add_option("--tol", fermi_tol, "relative tolerance");

    // scan
    ScanArgs scan;
    auto* scan_cmd = app.add_subcommand("scan", "sweep b or rho, write CSV");
    scan_cmd->add_option("--param", scan.param, "b|rho")->required();
    scan_cmd->add_option("--from", scan.from)->required();
    scan_cmd->add_option("--to", scan.to)->required();
    scan_cmd->add_option("--steps", scan.steps)->required();
    scan_cmd->add_option("--scale", scan.scale, "linear|log");
    scan_cmd->add_option("--b", scan.fixed_b, "fixed b when sweeping rho");
    scan_cmd->add_option("--rho", scan.fixed_rho, "fixed rho when sweeping b");
    scan_cmd->add_option("--out", scan.out, "output CSV path (stdout if omitted)");

    // verify
    std::string verify_suite = "all";
    std::uint64_t verify_seed = 12345;
    auto* verify_cmd = app.add_subcommand("verify", "run the property batteries");
    verify_cmd->add_option("--suite", verify_suite, "wigner|kinetic|all");
    verify_cmd->add_option("--seed", verify_seed, "seed for randomized checks");

    // reduce1d
    std::string rd_density, rd_bc = "dirichlet", rd_out, rd_density_out;
    std::string rd_algorithm = "admm";
    double rd_b3 = 1.0, rd_b2 = 0.0;
    magkin::MinimizeOptions rd_opts;
    auto* reduce_cmd = app.add_subcommand("reduce1d", "reduced 1d variational solver");
    reduce_cmd->add_option("--density", rd_density, "two-column CSV (x,rho) with header")
        ->required();
    reduce_cmd->add_option("--b3", rd_b3, "field component along x3 (> 0)")->required();
    reduce_cmd->add_option("--b2", rd_b2, "field component along x2");
    reduce_cmd->add_option("--bc", rd_bc, "dirichlet|periodic");
    reduce_cmd->add_option("--algorithm", rd_algorithm, "admm|subgradient");
    reduce_cmd->add_option("--out", rd_out, "JSON result path");
    reduce_cmd->add_option("--density-out", rd_density_out, "CSV of the solved density");
    reduce_cmd->add_option("--max-iter", rd_opts.max_iter, "iteration cap");
    reduce_cmd->add_option("--tol", rd_opts.tol, "relative energy stall tolerance");
    reduce_cmd->add_option("--feas-tol", rd_opts.feas_tol, "feasibility tolerance");
    reduce_cmd->add_option("--step", rd_opts.step_scale, "subgradient step scale");

    CLI11_PARSE(app, argc, argv);

    try {
        if (omega2d_cmd->parsed()) {
            const auto closed = magkin::omega2d(o2_b, o2_rho);
            if (o2_oracle) {
                const double filled = magkin::omega2d_bathtub(o2_b, o2_rho);
                std::cout << "omega2d_closed  = " << fmt(closed.omega) << "\n";
                std::cout << "omega2d_bathtub = " << fmt(filled) << "\n";
                std::cout << "difference      = " << fmt(closed.omega - filled) << "\n";
            } else {
                std::cout << fmt(closed.omega) << "\n";
            }
            return kExitOk;
        }
        if (omega3d_cmd->parsed()) {
            if (o3_method == "oracle") {
                const auto r = magkin::omega3d_integral(o3_b, o3_rho);
                std::cout << "omega3d = " << fmt(r.omega) << "  (filled-integral oracle)\n";
                std::cout << "delta = " << fmt(r.fermi.delta)
                          << "  occupied_levels = " << r.fermi.occupied_levels << "\n";
            } else if (o3_method == "canonical") {
                const auto r = magkin::omega3d(o3_b, o3_rho);
                std::cout << "omega3d = " << fmt(r.omega) << "  (canonical proof-form)\n";
                std::cout << "delta = " << fmt(r.fermi.delta)
                          << "  occupied_levels = " << r.fermi.occupied_levels << "\n";
            } else if (o3_method == "prop" || o3_method == "proof") {
                const auto reference = magkin::omega3d_integral(o3_b, o3_rho);
                const auto prop =
                    magkin::omega3d_closed(o3_b, o3_rho, magkin::Omega3dVariant::prop_form);
                const auto proof =
                    magkin::omega3d_closed(o3_b, o3_rho, magkin::Omega3dVariant::proof_form);
                const auto matches = [&](double v) {
                    return std::abs(v - reference.omega) <= 1e-10 * (1.0 + reference.omega);
                };
                std::cout << "omega3d_prop  = " << fmt(prop.omega)
                          << (matches(prop.omega) ? "  <- matches oracle\n" : "\n");
                std::cout << "omega3d_proof = " << fmt(proof.omega)
                          << (matches(proof.omega) ? "  <- matches oracle\n" : "\n");
                std::cout << "oracle        = " << fmt(reference.omega) << "\n";
                std::cout << "delta = " << fmt(reference.fermi.delta)
                          << "  occupied_levels = " << reference.fermi.occupied_levels << "\n";
            } else {
                throw std::domain_error("omega3d: --method must be oracle|prop|proof|canonical");
            }
            return kExitOk;
        }
        if (fermi_cmd->parsed()) {
            const auto sol = magkin::fermi_level(fermi_b, fermi_rho, fermi_tol);
            std::cout << "delta = " << fmt(sol.delta) << "\n";
            std::cout << "occupied_levels = " << sol.occupied_levels << "\n";
            std::cout << "residual = " << fmt(sol.residual) << "\n";
            return kExitOk;
        }
        if (scan_cmd->parsed()) return run_scan(scan);
        if (verify_cmd->parsed()) return run_verify(verify_suite, verify_seed);
        if (reduce_cmd->parsed())
            return run_reduce1d(rd_density, rd_b3, rd_b2, rd_bc, rd_algorithm, rd_out,
                                rd_density_out, rd_opts);
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
