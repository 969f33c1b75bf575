// polyknot: generate polygonal knots, evaluate their Mobius energy,
// thickness and ropelength, check the energy/ropelength inequalities, sweep
// bound ratios, and relax knots by gradient descent.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polyknot/bounds.hpp"
#include "polyknot/energy.hpp"
#include "polyknot/geometry.hpp"
#include "polyknot/io.hpp"
#include "polyknot/parallel.hpp"
#include "polyknot/relax.hpp"
#include "polyknot/thickness.hpp"
#include "polyknot/verify.hpp"

namespace {

using polyknot::json;

struct GenOptions {
    std::vector<double> circle;       // radius
    std::vector<int> torus;           // p q
    double major = 2.0;
    double minor = 1.0;
    int n = 512;
    double perturb_amplitude = 0.0;
    std::uint64_t seed = 0;
    std::string output;
};

int run_gen(const GenOptions& o) {
    polyknot::PolylineKnot knot = [&] {
        if (!o.circle.empty() && !o.torus.empty()) {
            throw polyknot::BadParameter("choose either --circle or --torus");
        }
        if (!o.circle.empty()) return polyknot::make_circle(o.circle[0], o.n);
        if (o.torus.size() == 2) {
            return polyknot::make_torus_knot(o.torus[0], o.torus[1], o.major, o.minor, o.n);
        }
        throw polyknot::BadParameter("one of --circle or --torus is required");
    }();
    if (o.perturb_amplitude > 0.0) {
        knot = polyknot::perturb(knot, o.perturb_amplitude, o.seed);
    }
    polyknot::write_knot(knot, o.output);
    std::cout << "wrote " << o.output << " (" << knot.size()
              << " vertices, L = " << knot.total_length() << ")\n";
    return 0;
}

json quadrature_config_json(const polyknot::QuadratureConfig& q) {
    return json{{"subdivisions_per_edge", q.subdivisions_per_edge},
                {"summation_mode", "pairwise-compensated"}};
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        polyknot::write_text_file(path, text);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"polygonal knot energy, thickness and bound toolkit"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "cap worker threads (0 = all cores)");

    GenOptions gen;
    auto* cmd_gen = app.add_subcommand("gen", "generate a knot file");
    cmd_gen->add_option("--circle", gen.circle, "circle radius")->expected(1);
    cmd_gen->add_option("--torus", gen.torus, "torus knot indices p q")->expected(2);
    cmd_gen->add_option("--major", gen.major, "torus major radius");
    cmd_gen->add_option("--minor", gen.minor, "torus minor radius");
    cmd_gen->add_option("--n", gen.n, "vertex count");
    cmd_gen->add_option("--perturb", gen.perturb_amplitude, "perturbation amplitude");
    cmd_gen->add_option("--seed", gen.seed, "perturbation seed");
    cmd_gen->add_option("-o,--output", gen.output, "output knot file (.json or .xyz)")
        ->required();

    std::string in_path, out_path;
    polyknot::QuadratureConfig quad;
    double threshold = 0.0;

    auto* cmd_energy = app.add_subcommand("energy", "Mobius energy breakdown of a knot");
    cmd_energy->add_option("input", in_path, "knot file")->required();
    cmd_energy->add_option("--threshold", threshold,
                           "arc split threshold (default pi * thickness radius)");
    cmd_energy->add_option("--subdivisions", quad.subdivisions_per_edge,
                           "quadrature nodes per edge");
    cmd_energy->add_option("-o,--output", out_path, "output JSON (default stdout)");

    auto* cmd_thick = app.add_subcommand("thickness", "thickness and ropelength report");
    cmd_thick->add_option("input", in_path, "knot file")->required();
    cmd_thick->add_option("-o,--output", out_path, "output JSON (default stdout)");

    double bounds_length = 0.0;
    std::string bounds_input;
    auto* cmd_bounds = app.add_subcommand("bounds", "energy bounds at a ropelength");
    cmd_bounds->add_option("--length", bounds_length, "normalized length (ropelength)");
    cmd_bounds->add_option("input", bounds_input, "knot file (uses its ropelength)");
    cmd_bounds->add_option("-o,--output", out_path, "output JSON (default stdout)");

    polyknot::VerifyConfig verify_cfg;
    auto* cmd_verify = app.add_subcommand("verify", "audit every inequality on a knot");
    cmd_verify->add_option("input", in_path, "knot file")->required();
    cmd_verify->add_option("--subdivisions", verify_cfg.quadrature.subdivisions_per_edge,
                           "quadrature nodes per edge");
    cmd_verify->add_option("--samples", verify_cfg.chord_samples, "chord check samples");
    cmd_verify->add_option("--basepoints", verify_cfg.basepoints,
                           "basepoints for distal checks");
    cmd_verify->add_option("-o,--output", out_path, "report JSON path");

    double lmin = 42.0, lmax = 1e5;
    int steps = 512;
    auto* cmd_sweep = app.add_subcommand("sweep", "detailed bound / L^(4/3) ratio sweep");
    cmd_sweep->add_option("--lmin", lmin, "lower length");
    cmd_sweep->add_option("--lmax", lmax, "upper length");
    cmd_sweep->add_option("--steps", steps, "grid points");
    cmd_sweep->add_option("-o,--output", out_path, "output CSV")->required();

    int max_steps = 500;
    std::string trace_path;
    auto* cmd_relax = app.add_subcommand("relax", "gradient-descent energy relaxation");
    cmd_relax->add_option("input", in_path, "knot file")->required();
    cmd_relax->add_option("--max-steps", max_steps, "descent step limit");
    cmd_relax->add_option("--subdivisions", quad.subdivisions_per_edge,
                          "quadrature nodes per edge");
    cmd_relax->add_option("-o,--output", out_path, "relaxed knot file")->required();
    cmd_relax->add_option("--trace", trace_path, "descent trace CSV");

    CLI11_PARSE(app, argc, argv);
    polyknot::parallel::set_thread_limit(threads);

    try {
        if (cmd_gen->parsed()) return run_gen(gen);

        if (cmd_energy->parsed()) {
            const polyknot::PolylineKnot knot = polyknot::read_knot(in_path);
            double th = threshold;
            if (th <= 0.0) th = polyknot::kPi * polyknot::thickness(knot).radius;
            th = std::min(th, knot.total_length() / 2.0);
            const polyknot::EnergyBreakdown e = polyknot::mobius_energy(knot, quad, th);
            const json config{{"command", "energy"},
                              {"input", in_path},
                              {"threshold_arc", th},
                              {"quadrature", quadrature_config_json(quad)}};
            emit(polyknot::artifact_text(polyknot::to_json(e), config), out_path);
            return 0;
        }

        if (cmd_thick->parsed()) {
            const polyknot::PolylineKnot knot = polyknot::read_knot(in_path);
            const polyknot::ThicknessReport t = polyknot::thickness(knot);
            const json config{{"command", "thickness"}, {"input", in_path}};
            emit(polyknot::artifact_text(polyknot::to_json(t), config), out_path);
            return 0;
        }

        if (cmd_bounds->parsed()) {
            double L = bounds_length;
            json config{{"command", "bounds"}};
            if (!bounds_input.empty()) {
                L = polyknot::thickness(polyknot::read_knot(bounds_input)).ropelength;
                config["input"] = bounds_input;
            }
            if (!(L > 0.0)) {
                throw polyknot::BadParameter("bounds needs --length or a knot file");
            }
            config["length"] = L;
            emit(polyknot::artifact_text(polyknot::to_json(polyknot::bound_report(L)), config),
                 out_path);
            return 0;
        }

        if (cmd_verify->parsed()) {
            const polyknot::PolylineKnot knot = polyknot::read_knot(in_path);
            const polyknot::VerificationReport rep = polyknot::verify_knot(knot, verify_cfg);
            const json config{
                {"command", "verify"},
                {"input", in_path},
                {"quadrature", quadrature_config_json(verify_cfg.quadrature)},
                {"chord_samples", verify_cfg.chord_samples},
                {"basepoints", verify_cfg.basepoints}};
            if (!out_path.empty()) {
                polyknot::write_text_file(
                    out_path, polyknot::artifact_text(polyknot::to_json(rep), config));
            }
            polyknot::print_verification_table(rep, std::cout);
            return rep.overall ? 0 : 1;
        }

        if (cmd_sweep->parsed()) {
            const polyknot::SweepResult sweep = polyknot::sweep_ratio(lmin, lmax, steps);
            const json config{{"command", "sweep"},
                              {"lmin", lmin},
                              {"lmax", lmax},
                              {"steps", steps}};
            emit(polyknot::sweep_to_csv(sweep, config), out_path);
            std::cout << "max ratio " << sweep.max_ratio << " at L = " << sweep.argmax_length
                      << "\n";
            return 0;
        }

        if (cmd_relax->parsed()) {
            const polyknot::PolylineKnot knot = polyknot::read_knot(in_path);
            const polyknot::RelaxTrace trace = polyknot::relax(knot, max_steps, quad);
            polyknot::write_knot(trace.final_knot, out_path);
            const json config{{"command", "relax"},
                              {"input", in_path},
                              {"max_steps", max_steps},
                              {"quadrature", quadrature_config_json(quad)}};
            if (!trace_path.empty()) {
                polyknot::write_text_file(trace_path,
                                          polyknot::relax_trace_to_csv(trace, config));
            }
            std::cout << "final energy " << trace.steps.back().energy << " after "
                      << trace.steps.back().iteration << " iterations"
                      << (trace.converged ? " (converged)" : "") << "\n";
            return 0;
        }
    } catch (const polyknot::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
