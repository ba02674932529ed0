#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "inkseep/energy.hpp"
#include "inkseep/fiber.hpp"
#include "inkseep/gasolver.hpp"
#include "inkseep/grid.hpp"

namespace inkseep {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fully resolved run description. Omitted keys take the reference
/// parameter defaults; gravity_sign is kept separate from Gg so a config
/// survives a serialize/load round trip unchanged.
struct RunConfig {
    std::uint64_t seed = 1;

    int nx = 20;
    int ny = 20;
    int nz_paper = 10;
    int nz_reservoir = 2;
    double cell_size = 1.0;

    FiberParams fiber;

    double c1 = 1.0;
    double c2 = 0.125;
    double A0 = 0.5;
    double A1 = 1.0 / 3.0;
    double A2 = 1.0 / 6.0;
    double Gg = 0.0;
    int gravity_sign = 1;
    double lambda = 100.0;
    double v_fluid0 = 0.0;

    std::string solver_type = "ga";
    ReservoirSpec reservoir;
    GaConfig ga;

    std::string output_directory = "out";
    bool write_ivf1 = true;
    bool write_vtk = true;
    bool write_csv = true;

    Grid make_grid() const { return Grid(nx, ny, nz_paper, nz_reservoir, cell_size); }

    FiberParams fiber_params() const {
        FiberParams p = fiber;
        p.surface_width = nx * cell_size;
        p.surface_depth = ny * cell_size;
        return p;
    }

    EnergyParams energy_params(const Grid& grid) const {
        EnergyParams p;
        p.c1 = c1;
        p.c2 = c2;
        p.A0 = A0;
        p.A1 = A1;
        p.A2 = A2;
        p.Gg = gravity_sign * Gg;
        p.lambda = lambda;
        p.v_fluid0 = v_fluid0;
        p.v0 = static_cast<double>(grid.cell_count());
        p.z_max = grid.z_max();
        p.validate();
        return p;
    }
};

namespace detail {

inline void check_keys(const nlohmann::json& j, const std::string& context,
                       std::initializer_list<const char*> allowed) {
    if (!j.is_object())
        throw config_error("config: '" + context + "' must be an object");
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (item.key() == k) {
                ok = true;
                break;
            }
        if (!ok)
            throw config_error("config: unknown key '" + context + "." + item.key() +
                               "'");
    }
}

template <typename T>
T get_as(const nlohmann::json& j, const std::string& context, const char* key,
         T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw config_error("config: key '" + context + "." + std::string(key) +
                           "' has the wrong type");
    }
}

} // namespace detail

inline RunConfig config_from_json(const nlohmann::json& j) {
    using detail::check_keys;
    using detail::get_as;

    check_keys(j, "", {"seed", "grid", "fiber", "energy", "solver", "output"});
    if (!j.contains("grid")) throw config_error("config: missing required key 'grid'");

    RunConfig c;
    c.seed = get_as<std::uint64_t>(j, "", "seed", 1);

    const nlohmann::json& g = j.at("grid");
    check_keys(g, "grid", {"nx", "ny", "nz_paper", "nz_reservoir", "cell_size"});
    c.nx = get_as<int>(g, "grid", "nx", 20);
    c.ny = get_as<int>(g, "grid", "ny", 20);
    c.nz_paper = get_as<int>(g, "grid", "nz_paper", 10);
    c.nz_reservoir = get_as<int>(g, "grid", "nz_reservoir", 2);
    c.cell_size = get_as<double>(g, "grid", "cell_size", 1.0);
    Grid grid(1, 1, 1, 0, 1.0);
    try {
        grid = c.make_grid();
    } catch (const std::invalid_argument& e) {
        throw config_error(std::string("config: grid: ") + e.what());
    }

    c.fiber.seed = c.seed;
    if (j.contains("fiber")) {
        const nlohmann::json& f = j.at("fiber");
        check_keys(f, "fiber",
                   {"count", "blocks_per_fiber", "block_length", "block_width",
                    "block_height", "max_turn_deg", "max_bend_deg", "seed"});
        c.fiber.fiber_count = get_as<int>(f, "fiber", "count", c.fiber.fiber_count);
        c.fiber.blocks_per_fiber =
            get_as<int>(f, "fiber", "blocks_per_fiber", c.fiber.blocks_per_fiber);
        c.fiber.block_length =
            get_as<double>(f, "fiber", "block_length", c.fiber.block_length);
        c.fiber.block_width =
            get_as<double>(f, "fiber", "block_width", c.fiber.block_width);
        c.fiber.block_height =
            get_as<double>(f, "fiber", "block_height", c.fiber.block_height);
        c.fiber.max_turn_deg =
            get_as<double>(f, "fiber", "max_turn_deg", c.fiber.max_turn_deg);
        c.fiber.max_bend_deg =
            get_as<double>(f, "fiber", "max_bend_deg", c.fiber.max_bend_deg);
        c.fiber.seed = get_as<std::uint64_t>(f, "fiber", "seed", c.seed);
    }
    try {
        c.fiber_params().validate();
    } catch (const std::invalid_argument& e) {
        throw config_error(std::string("config: fiber: ") + e.what());
    }

    // reference defaults that depend on the grid
    c.Gg = c.c1 / grid.z_max();
    if (j.contains("energy")) {
        const nlohmann::json& e = j.at("energy");
        check_keys(e, "energy",
                   {"c1", "c2", "A0", "A1", "A2", "Gg", "gravity_sign", "lambda",
                    "v_fluid0"});
        c.c1 = get_as<double>(e, "energy", "c1", 1.0);
        c.c2 = get_as<double>(e, "energy", "c2", c.c1 / 8.0);
        c.A0 = get_as<double>(e, "energy", "A0", c.c1 / 2.0);
        c.A1 = get_as<double>(e, "energy", "A1", 2.0 / 3.0 * c.A0);
        c.A2 = get_as<double>(e, "energy", "A2", 0.5 * c.A1);
        c.Gg = get_as<double>(e, "energy", "Gg", c.c1 / grid.z_max());
        c.gravity_sign = get_as<int>(e, "energy", "gravity_sign", 1);
        c.lambda = get_as<double>(e, "energy", "lambda", 100.0);
        c.v_fluid0 = get_as<double>(e, "energy", "v_fluid0", 0.0);
        if (c.gravity_sign != 1 && c.gravity_sign != -1)
            throw config_error("config: key 'energy.gravity_sign' must be 1 or -1");
    }

    c.reservoir.depth_layers = c.nz_reservoir;
    c.ga.seed = c.seed;
    if (j.contains("solver")) {
        const nlohmann::json& s = j.at("solver");
        check_keys(s, "solver", {"type", "reservoir", "ga"});
        c.solver_type = get_as<std::string>(s, "solver", "type", "ga");
        if (s.contains("reservoir")) {
            const nlohmann::json& r = s.at("reservoir");
            check_keys(r, "solver.reservoir", {"depth_layers", "refill_enabled"});
            c.reservoir.depth_layers =
                get_as<int>(r, "solver.reservoir", "depth_layers", c.nz_reservoir);
            c.reservoir.refill_enabled =
                get_as<bool>(r, "solver.reservoir", "refill_enabled", true);
        }
        if (s.contains("ga")) {
            const nlohmann::json& a = s.at("ga");
            check_keys(a, "solver.ga",
                       {"population_size", "generations_per_inner_iteration",
                        "crossover_rate", "mutation_rate", "tournament_size",
                        "elitism_count", "inner_iterations_per_epoch",
                        "convergence_rel_tol", "max_outer_iterations", "seed"});
            c.ga.population_size =
                get_as<int>(a, "solver.ga", "population_size", c.ga.population_size);
            c.ga.generations_per_inner_iteration =
                get_as<int>(a, "solver.ga", "generations_per_inner_iteration",
                            c.ga.generations_per_inner_iteration);
            c.ga.crossover_rate =
                get_as<double>(a, "solver.ga", "crossover_rate", c.ga.crossover_rate);
            c.ga.mutation_rate =
                get_as<double>(a, "solver.ga", "mutation_rate", c.ga.mutation_rate);
            c.ga.tournament_size =
                get_as<int>(a, "solver.ga", "tournament_size", c.ga.tournament_size);
            c.ga.elitism_count =
                get_as<int>(a, "solver.ga", "elitism_count", c.ga.elitism_count);
            c.ga.inner_iterations_per_epoch =
                get_as<int>(a, "solver.ga", "inner_iterations_per_epoch",
                            c.ga.inner_iterations_per_epoch);
            c.ga.convergence_rel_tol = get_as<double>(
                a, "solver.ga", "convergence_rel_tol", c.ga.convergence_rel_tol);
            c.ga.max_outer_iterations = get_as<int>(
                a, "solver.ga", "max_outer_iterations", c.ga.max_outer_iterations);
            c.ga.seed = get_as<std::uint64_t>(a, "solver.ga", "seed", c.seed);
        }
    }
    if (c.solver_type != "ga" && c.solver_type != "mincut")
        throw config_error("config: key 'solver.type' must be \"ga\" or \"mincut\"");
    if (c.solver_type == "mincut" && c.lambda != 0.0)
        throw config_error(
            "config: solver \"mincut\" requires energy.lambda = 0 (the volume "
            "constraint is outside the global optimizer)");
    if (c.v_fluid0 < 0)
        throw config_error("config: key 'energy.v_fluid0' must be >= 0");

    if (j.contains("output")) {
        const nlohmann::json& o = j.at("output");
        check_keys(o, "output", {"directory", "formats"});
        c.output_directory =
            get_as<std::string>(o, "output", "directory", c.output_directory);
        if (o.contains("formats")) {
            if (!o.at("formats").is_array())
                throw config_error("config: key 'output.formats' must be an array");
            c.write_ivf1 = c.write_vtk = c.write_csv = false;
            for (const auto& fmt : o.at("formats")) {
                const std::string v = fmt.get<std::string>();
                if (v == "ivf1")
                    c.write_ivf1 = true;
                else if (v == "vtk")
                    c.write_vtk = true;
                else if (v == "csv")
                    c.write_csv = true;
                else
                    throw config_error("config: unknown format '" + v +
                                       "' in 'output.formats'");
            }
        }
    }

    try {
        c.energy_params(grid);
        c.reservoir.validate(grid);
        c.ga.validate();
    } catch (const std::invalid_argument& e) {
        throw config_error(std::string("config: ") + e.what());
    }
    return c;
}

inline nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json j;
    j["seed"] = c.seed;
    j["grid"] = {{"nx", c.nx},
                 {"ny", c.ny},
                 {"nz_paper", c.nz_paper},
                 {"nz_reservoir", c.nz_reservoir},
                 {"cell_size", c.cell_size}};
    j["fiber"] = {{"count", c.fiber.fiber_count},
                  {"blocks_per_fiber", c.fiber.blocks_per_fiber},
                  {"block_length", c.fiber.block_length},
                  {"block_width", c.fiber.block_width},
                  {"block_height", c.fiber.block_height},
                  {"max_turn_deg", c.fiber.max_turn_deg},
                  {"max_bend_deg", c.fiber.max_bend_deg},
                  {"seed", c.fiber.seed}};
    j["energy"] = {{"c1", c.c1},
                   {"c2", c.c2},
                   {"A0", c.A0},
                   {"A1", c.A1},
                   {"A2", c.A2},
                   {"Gg", c.Gg},
                   {"gravity_sign", c.gravity_sign},
                   {"lambda", c.lambda},
                   {"v_fluid0", c.v_fluid0}};
    j["solver"] = {{"type", c.solver_type},
                   {"reservoir",
                    {{"depth_layers", c.reservoir.depth_layers},
                     {"refill_enabled", c.reservoir.refill_enabled}}},
                   {"ga",
                    {{"population_size", c.ga.population_size},
                     {"generations_per_inner_iteration",
                      c.ga.generations_per_inner_iteration},
                     {"crossover_rate", c.ga.crossover_rate},
                     {"mutation_rate", c.ga.mutation_rate},
                     {"tournament_size", c.ga.tournament_size},
                     {"elitism_count", c.ga.elitism_count},
                     {"inner_iterations_per_epoch", c.ga.inner_iterations_per_epoch},
                     {"convergence_rel_tol", c.ga.convergence_rel_tol},
                     {"max_outer_iterations", c.ga.max_outer_iterations},
                     {"seed", c.ga.seed}}}};
    std::vector<std::string> formats;
    if (c.write_ivf1) formats.push_back("ivf1");
    if (c.write_vtk) formats.push_back("vtk");
    if (c.write_csv) formats.push_back("csv");
    j["output"] = {{"directory", c.output_directory}, {"formats", formats}};
    return j;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw config_error("config: invalid JSON in " + path + ": " + e.what());
    }
    return config_from_json(j);
}

} // namespace inkseep
