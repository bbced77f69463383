#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "stefan/density_engine.hpp"
#include "stefan/harness.hpp"
#include "stefan/io.hpp"
#include "stefan/m1.hpp"
#include "stefan/particles.hpp"
#include "stefan/solvers.hpp"

namespace {

using stefan::io::json;

std::string out_file(const std::string& dir, const std::string& name) {
    if (dir.empty() || dir == ".") return name;
    return dir.back() == '/' ? dir + name : dir + "/" + name;
}

void write_item_paths(const stefan::ExperimentReport& rep,
                      const std::string& out_dir, const std::string& format) {
    if (format != "csv") return;
    for (const auto& item : rep.items) {
        std::string name = item.label;
        for (char& c : name)
            if (c == '=' || c == ' ' || c == '/') c = '_';
        stefan::io::write_path_csv(out_file(out_dir, "lambda_" + name + ".csv"),
                                   item.path);
    }
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        const auto comma = csv.find(',', pos);
        const std::string tok =
            csv.substr(pos, comma == std::string::npos ? csv.npos : comma - pos);
        if (!tok.empty()) out.push_back(std::stod(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimal and physical solutions of the McKean-Vlasov "
                 "supercooled Stefan problem"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", format = "csv";
    std::uint64_t seed_override = 0;
    bool seed_set = false;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config)
            sub->add_option("--config", config_path, "JSON config file")
                ->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--format", format, "path output format")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option_function<std::uint64_t>(
            "--seed",
            [&](const std::uint64_t& s) {
                seed_override = s;
                seed_set = true;
            },
            "seed override");
    };

    auto* solve_cmd = app.add_subcommand("solve", "minimal or physical solve");
    std::string solver_name = "picard";
    add_common(solve_cmd, true);
    solve_cmd->add_option("--solver", solver_name, "picard | physical")
        ->check(CLI::IsMember({"picard", "physical"}));

    auto* particles_cmd =
        app.add_subcommand("particles", "N-particle simulation");
    int n_particles = 10000;
    add_common(particles_cmd, true);
    particles_cmd->add_option("--n", n_particles, "particle count");

    auto* shift_cmd = app.add_subcommand("shift-scan", "solve across shifts");
    std::string shifts_arg = "0";
    add_common(shift_cmd, true);
    shift_cmd->add_option("--shifts", shifts_arg, "comma separated shifts");
    shift_cmd->add_option("--solver", solver_name, "picard | physical")
        ->check(CLI::IsMember({"picard", "physical"}));

    auto* converge_cmd = app.add_subcommand(
        "converge-scan", "ordered-law convergence probe");
    std::string mode = "shift";
    int count = 6;
    add_common(converge_cmd, true);
    converge_cmd->add_option("--mode", mode, "shift | smooth | laws")
        ->check(CLI::IsMember({"shift", "smooth", "laws"}));
    converge_cmd->add_option("--count", count, "sequence length");

    auto* left_cmd = app.add_subcommand("left-limit", "left-limit gap probe");
    add_common(left_cmd, true);
    left_cmd->add_option("--count", count, "sequence length");

    auto* m1_cmd = app.add_subcommand("m1", "distance between two CSV paths");
    std::string path_a, path_b;
    m1_cmd->add_option("--a", path_a, "first path CSV")->required();
    m1_cmd->add_option("--b", path_b, "second path CSV")->required();
    m1_cmd->add_option("--out", out_dir, "output directory");

    auto* jump_cmd =
        app.add_subcommand("jump", "physical jump of a density CSV");
    std::string density_path;
    double jump_alpha = 1.0;
    bool no_refine = false;
    jump_cmd->add_option("--density", density_path, "density CSV")->required();
    jump_cmd->add_option("--alpha", jump_alpha, "feedback strength");
    jump_cmd->add_flag("--no-refine", no_refine, "grid-resolved crossing only");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e); // prints the offending flag
        return code == 0 ? 0 : 1;
    }

    try {
        if (m1_cmd->parsed()) {
            const auto a = stefan::io::read_path_csv(path_a);
            const auto b = stefan::io::read_path_csv(path_b);
            const double d = stefan::levy_m1_distance(a, b);
            std::printf("%.12g\n", d);
            json j;
            j["distance"] = d;
            j["a"] = path_a;
            j["b"] = path_b;
            stefan::io::write_json(out_file(out_dir, "m1.json"), j);
            return 0;
        }
        if (jump_cmd->parsed()) {
            const auto nu = stefan::io::read_density_csv(density_path);
            const double delta =
                stefan::physical_jump(nu, jump_alpha, !no_refine);
            std::printf("%.12g\n", delta);
            return 0;
        }

        auto loaded = stefan::io::load_config_file(config_path);
        if (seed_set) loaded.config.seed = seed_override;
        const auto& cfg = loaded.config;
        const auto& law = loaded.law;
        const auto kind = solver_name == "physical"
                              ? stefan::SolverKind::Physical
                              : stefan::SolverKind::Picard;

        if (solve_cmd->parsed()) {
            json summary;
            stefan::BoundaryPath path;
            if (kind == stefan::SolverKind::Picard) {
                auto res = stefan::minimal_picard(law, cfg);
                path = std::move(res.path);
                summary["solver"] = "picard";
                summary["converged"] = res.trace.converged;
                summary["iterations"] = res.trace.iterations;
                summary["sup_deltas"] = res.trace.sup_deltas;
            } else {
                stefan::PhysicalDiagnostics diag;
                path = stefan::physical_timestep(law, cfg, &diag);
                summary["solver"] = "physical";
                summary["converged"] = true;
                summary["iterations"] = 0;
                summary["escaped_mass"] = diag.escaped;
                summary["max_cascade_rounds"] = diag.max_cascade_rounds;
            }
            summary["residual"] = stefan::solve_residual(law, path, cfg);
            const double threshold = std::max(5.0 * cfg.dx, 1e-4);
            const auto jt = path.jump_times(threshold);
            std::vector<double> js;
            for (double t : jt)
                js.push_back(path.value_at(t) - path.value_before(t));
            summary["jump_times"] = jt;
            summary["jump_sizes"] = js;
            summary["config"] = stefan::io::config_to_json(cfg);
            stefan::io::write_path_csv(out_file(out_dir, "lambda.csv"), path);
            stefan::io::write_json(out_file(out_dir, "summary.json"), summary);
            return 0;
        }

        if (particles_cmd->parsed()) {
            const auto res = stefan::simulate(law, n_particles, cfg);
            stefan::io::write_path_csv(out_file(out_dir, "ln_path.csv"),
                                       res.loss_path);
            json j = stefan::io::cascade_log_to_json(res.log);
            j["n"] = n_particles;
            j["seed"] = cfg.seed;
            j["final_loss"] = res.loss_path.values().back();
            stefan::io::write_json(out_file(out_dir, "cascade_log.json"), j);
            return 0;
        }

        stefan::ExperimentReport rep;
        try {
            if (shift_cmd->parsed()) {
                auto shifts = parse_list(shifts_arg);
                std::sort(shifts.begin(), shifts.end());
                rep = stefan::shift_scan(law, shifts, kind, cfg);
            } else if (converge_cmd->parsed()) {
                if (mode == "laws") {
                    std::ifstream in(config_path);
                    json raw = json::parse(in);
                    std::vector<stefan::InitialLaw> seq;
                    for (const auto& lj : raw.at("law_sequence"))
                        seq.push_back(stefan::io::law_from_json(lj));
                    rep = stefan::right_continuity_probe(law, seq, cfg);
                } else {
                    std::vector<double> params;
                    for (int i = 1; i <= count; ++i)
                        params.push_back(mode == "shift"
                                             ? std::ldexp(1.0, -i)
                                             : std::ldexp(1.0, i - 1));
                    rep = stefan::right_continuity_probe(
                        law,
                        mode == "shift"
                            ? stefan::ApproximationMode::RightShift
                            : stefan::ApproximationMode::ExponentialSmoothing,
                        params, cfg);
                }
            } else if (left_cmd->parsed()) {
                std::vector<double> shifts;
                for (int i = 1; i <= count; ++i)
                    shifts.push_back(-std::ldexp(1.0, -i));
                std::sort(shifts.begin(), shifts.end());
                rep = stefan::left_limit_probe(law, shifts, cfg);
            }
        } catch (const stefan::OrderingViolation& e) {
            json j;
            j["experiment"] = "converge-scan";
            j["flags"] = {{"ordering_violation", true}};
            j["error"] = e.what();
            stefan::io::write_json(out_file(out_dir, "report.json"), j);
            std::cerr << "OrderingViolation: " << e.what() << "\n";
            return 2;
        }

        stefan::io::write_json(out_file(out_dir, "report.json"),
                               stefan::io::report_to_json(rep));
        write_item_paths(rep, out_dir, format);
        if (rep.ordering_violation || !rep.dominance_ok || !rep.monotone_ok) {
            std::cerr << "invariant violation in report\n";
            return 2;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
