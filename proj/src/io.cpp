#include "stefan/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stefan::io {

namespace {

std::string join_path(const std::string& dir, const std::string& file) {
    if (dir.empty() || file.empty() || file.front() == '/') return file;
    return dir.back() == '/' ? dir + file : dir + "/" + file;
}

} // namespace

SimulationConfig config_from_json(const json& j) {
    SimulationConfig cfg;
    if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<double>();
    if (j.contains("horizon")) cfg.horizon = j.at("horizon").get<double>();
    if (j.contains("dt")) cfg.dt = j.at("dt").get<double>();
    if (j.contains("dx")) cfg.dx = j.at("dx").get<double>();
    if (j.contains("x_max")) cfg.x_max = j.at("x_max").get<double>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("picard_tol")) cfg.picard_tol = j.at("picard_tol").get<double>();
    if (j.contains("picard_max_iters"))
        cfg.picard_max_iters = j.at("picard_max_iters").get<int>();
    if (j.contains("jump_refine")) cfg.jump_refine = j.at("jump_refine").get<bool>();
    if (j.contains("increment_after_diffuse"))
        cfg.increment_after_diffuse = j.at("increment_after_diffuse").get<bool>();
    cfg.validate();
    return cfg;
}

json config_to_json(const SimulationConfig& cfg) {
    json j;
    j["alpha"] = cfg.alpha;
    j["horizon"] = cfg.horizon;
    j["dt"] = cfg.dt;
    j["dx"] = cfg.dx;
    j["x_max"] = cfg.x_max;
    j["seed"] = cfg.seed;
    j["picard_tol"] = cfg.picard_tol;
    j["picard_max_iters"] = cfg.picard_max_iters;
    j["jump_refine"] = cfg.jump_refine;
    return j;
}

InitialLaw law_from_json(const json& j, const std::string& base_dir) {
    const std::string variant = j.at("variant").get<std::string>();
    InitialLaw law = [&]() -> InitialLaw {
        if (variant == "uniform")
            return InitialLaw::uniform(j.at("a").get<double>(),
                                       j.at("b").get<double>());
        if (variant == "truncated_normal")
            return InitialLaw::truncated_normal(j.at("mean").get<double>(),
                                                j.at("sd").get<double>());
        if (variant == "dirac")
            return InitialLaw::dirac(j.at("location").get<double>());
        if (variant == "dirac_mixture") {
            std::vector<std::pair<double, double>> atoms;
            for (const auto& a : j.at("atoms"))
                atoms.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
            return InitialLaw::dirac_mixture(std::move(atoms));
        }
        if (variant == "empirical")
            return InitialLaw::empirical(j.at("samples").get<std::vector<double>>());
        if (variant == "grid_density") {
            if (j.contains("csv")) {
                const SubProbabilityGrid g = read_density_csv(
                    join_path(base_dir, j.at("csv").get<std::string>()));
                return InitialLaw::grid_density(g.dx, g.cell_masses, g.lost_mass);
            }
            return InitialLaw::grid_density(
                j.at("dx").get<double>(),
                j.at("cell_masses").get<std::vector<double>>(),
                j.value("atom_at_zero", 0.0));
        }
        throw std::invalid_argument("unknown law variant: " + variant);
    }();
    if (j.contains("shift")) law = law.shifted(j.at("shift").get<double>());
    return law;
}

LoadedConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j = json::parse(in);
    LoadedConfig out{config_from_json(j),
                     law_from_json(j.at("law"),
                                   path.find('/') != std::string::npos
                                       ? path.substr(0, path.rfind('/'))
                                       : "")};
    if (!j.contains("x_max")) {
        out.config.x_max =
            default_x_max(out.law, out.config.horizon, out.config.dx);
        out.config.validate();
    }
    return out;
}

void write_path_csv(const std::string& path, const BoundaryPath& p) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write: " + path);
    out << "t,lambda\n";
    char buf[80];
    for (std::size_t i = 0; i < p.times().size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g", p.times()[i],
                      p.values()[i]);
        out << buf << '\n';
    }
}

BoundaryPath read_path_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open path csv: " + path);
    std::string line;
    std::getline(in, line); // header
    std::vector<double> t, v;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("malformed path csv line: " + line);
        t.push_back(std::stod(line.substr(0, comma)));
        v.push_back(std::stod(line.substr(comma + 1)));
    }
    return BoundaryPath(std::move(t), std::move(v));
}

SubProbabilityGrid read_density_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open density csv: " + path);
    std::string line;
    std::vector<double> xs, ds;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (!line.empty() && !(std::isdigit(line[0]) || line[0] == '-' ||
                               line[0] == '.' || line[0] == '+'))
            continue; // header
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("malformed density csv line: " + line);
        xs.push_back(std::stod(line.substr(0, comma)));
        ds.push_back(std::stod(line.substr(comma + 1)));
    }
    if (xs.size() < 2) throw std::runtime_error("density csv needs >= 2 rows");
    const double dx = xs[1] - xs[0];
    if (!(dx > 0.0)) throw std::runtime_error("density csv x must increase");
    for (std::size_t i = 2; i < xs.size(); ++i)
        if (std::abs((xs[i] - xs[i - 1]) - dx) > 1e-9 * std::max(1.0, dx))
            throw std::runtime_error("density csv requires uniform spacing");

    SubProbabilityGrid g;
    g.dx = dx;
    // Rows are cell midpoints; leading cells before the first row are empty.
    const auto lead = static_cast<long>(std::lround(xs[0] / dx - 0.5));
    if (lead < 0) throw std::runtime_error("density csv has x <= 0 rows");
    g.cell_masses.assign(static_cast<std::size_t>(lead), 0.0);
    for (double d : ds) g.cell_masses.push_back(d * dx);
    return g;
}

json report_to_json(const ExperimentReport& rep) {
    json j;
    j["experiment"] = rep.experiment_id;
    j["config"] = config_to_json(rep.config);
    j["grid"] = {{"dt", rep.config.dt},
                 {"dx", rep.config.dx},
                 {"x_max", rep.config.x_max},
                 {"horizon", rep.config.horizon}};
    json items = json::array();
    for (const auto& it : rep.items) {
        json ji;
        ji["label"] = it.label;
        ji["parameter"] = it.parameter;
        ji["converged"] = it.converged;
        ji["iterations"] = it.iterations;
        ji["residual"] = it.residual;
        ji["final_value"] = it.final_value;
        ji["jump_times"] = it.jump_times;
        ji["jump_sizes"] = it.jump_sizes;
        items.push_back(std::move(ji));
    }
    j["items"] = std::move(items);
    j["distance_kind"] = rep.distance_kind;
    j["m1_distances"] = rep.m1_distances;
    j["gap"] = rep.gap;
    j["limit_residual"] = rep.limit_residual;
    j["flags"] = {{"ordering_violation", rep.ordering_violation},
                  {"dominance_ok", rep.dominance_ok},
                  {"monotone_ok", rep.monotone_ok}};
    if (!rep.dense.probe_times.empty()) {
        j["dense"] = {{"probe_times", rep.dense.probe_times},
                      {"abs_errors", rep.dense.abs_errors},
                      {"tail_errors", rep.dense.tail_errors},
                      {"tails_vanishing", rep.dense.tails_vanishing}};
    }
    if (!rep.jump_check_times.empty()) {
        j["jump_check"] = {{"times", rep.jump_check_times},
                           {"residuals", rep.jump_check_residuals},
                           {"tolerance", rep.jump_check_tolerance}};
    }
    if (!rep.notes.empty()) j["notes"] = rep.notes;
    return j;
}

json cascade_log_to_json(const CascadeLog& log) {
    json events = json::array();
    for (const auto& e : log.events)
        events.push_back({{"time", e.time},
                          {"rounds", e.rounds},
                          {"absorbed", e.absorbed},
                          {"total_jump", e.total_jump}});
    json j;
    j["events"] = std::move(events);
    return j;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write: " + path);
    out << j.dump(2) << '\n';
}

} // namespace stefan::io
