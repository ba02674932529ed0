// Command-line front end: fibergen | solve | report | export.
// Exit codes: 0 ok, 2 config error, 3 solver non-convergence, 4 I/O error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "inkseep/inkseep.hpp"

namespace {

using inkseep::RunConfig;

struct ConfigCli {
    std::string config_path;

    int nx = 0, ny = 0, nz_paper = 0, nz_reservoir = -1;
    double cell_size = 0;
    std::uint64_t seed = 0;

    int fibers = 0, blocks = 0;
    double block_length = 0, block_width = 0, block_height = 0;
    double max_turn = 0, max_bend = 0;
    std::uint64_t fiber_seed = 0;

    double c1 = 0, c2 = 0, A0 = 0, A1 = 0, A2 = 0, Gg = 0, lambda = 0, v_fluid0 = 0;
    int gravity_sign = 0;

    std::string solver;
    int reservoir_depth = -1;
    bool refill = true;

    int pop = 0, generations = 0, tournament = 0, elitism = 0, inner = 0, max_outer = 0;
    double crossover = 0, mutation = 0, rel_tol = 0;
    std::uint64_t ga_seed = 0;

    std::string out_dir;
    std::vector<std::string> formats;
};

void add_config_options(CLI::App* cmd, ConfigCli& v) {
    cmd->add_option("--config,-c", v.config_path, "JSON config file");
    cmd->add_option("--seed", v.seed, "master seed");

    cmd->add_option("--nx", v.nx, "grid cells in x");
    cmd->add_option("--ny", v.ny, "grid cells in y");
    cmd->add_option("--nz-paper", v.nz_paper, "paper layers (z >= 0)");
    cmd->add_option("--nz-reservoir", v.nz_reservoir, "reservoir layers (z < 0)");
    cmd->add_option("--cell-size", v.cell_size, "cell edge length");

    cmd->add_option("--fibers", v.fibers, "number of fibers");
    cmd->add_option("--blocks", v.blocks, "blocks per fiber");
    cmd->add_option("--block-length", v.block_length, "block length (cells)");
    cmd->add_option("--block-width", v.block_width, "block width (cells)");
    cmd->add_option("--block-height", v.block_height, "block height (cells)");
    cmd->add_option("--max-turn", v.max_turn, "max in-plane turn per block (deg)");
    cmd->add_option("--max-bend", v.max_bend, "max out-of-plane bend (deg)");
    cmd->add_option("--fiber-seed", v.fiber_seed, "fiber generator seed");

    cmd->add_option("--c1", v.c1, "first-layer cohesion");
    cmd->add_option("--c2", v.c2, "second-layer cohesion");
    cmd->add_option("--A0", v.A0, "self adhesion");
    cmd->add_option("--A1", v.A1, "first-layer adhesion");
    cmd->add_option("--A2", v.A2, "second-layer adhesion");
    cmd->add_option("--Gg", v.Gg, "gravity constant magnitude");
    cmd->add_option("--gravity-sign", v.gravity_sign, "gravity sign (+1 or -1)");
    cmd->add_option("--lambda", v.lambda, "volume penalty weight");
    cmd->add_option("--v-fluid0", v.v_fluid0, "target ink volume (cells)");

    cmd->add_option("--solver", v.solver, "ga | mincut");
    cmd->add_option("--reservoir-depth", v.reservoir_depth, "active reservoir layers");
    cmd->add_flag("--refill,!--no-refill", v.refill, "reservoir refilling");

    cmd->add_option("--pop", v.pop, "GA population size");
    cmd->add_option("--generations", v.generations, "GA generations per iteration");
    cmd->add_option("--crossover", v.crossover, "GA crossover rate");
    cmd->add_option("--mutation", v.mutation, "GA mutation rate (<0: 1/length)");
    cmd->add_option("--tournament", v.tournament, "GA tournament size");
    cmd->add_option("--elitism", v.elitism, "GA elite count");
    cmd->add_option("--inner-iterations", v.inner, "iterations per epoch");
    cmd->add_option("--rel-tol", v.rel_tol, "outer convergence tolerance");
    cmd->add_option("--max-outer", v.max_outer, "outer iteration cap");
    cmd->add_option("--ga-seed", v.ga_seed, "GA seed");

    cmd->add_option("--out,-o", v.out_dir, "output directory");
    cmd->add_option("--format", v.formats, "output formats (ivf1, vtk, csv)");
}

RunConfig resolve_config(const CLI::App* cmd, const ConfigCli& v) {
    nlohmann::json j;
    if (!v.config_path.empty()) {
        std::ifstream in(v.config_path);
        if (!in)
            throw inkseep::config_error("cannot open config file: " + v.config_path);
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw inkseep::config_error("config: invalid JSON in " + v.config_path +
                                        ": " + e.what());
        }
    } else {
        j = nlohmann::json::object();
    }
    if (!j.contains("grid")) j["grid"] = nlohmann::json::object();

    const auto set = [&](const char* flag, const char* block, const char* key,
                         auto value) {
        if (cmd->count(flag)) j[block][key] = value;
    };
    if (cmd->count("--seed")) j["seed"] = v.seed;
    set("--nx", "grid", "nx", v.nx);
    set("--ny", "grid", "ny", v.ny);
    set("--nz-paper", "grid", "nz_paper", v.nz_paper);
    set("--nz-reservoir", "grid", "nz_reservoir", v.nz_reservoir);
    set("--cell-size", "grid", "cell_size", v.cell_size);

    set("--fibers", "fiber", "count", v.fibers);
    set("--blocks", "fiber", "blocks_per_fiber", v.blocks);
    set("--block-length", "fiber", "block_length", v.block_length);
    set("--block-width", "fiber", "block_width", v.block_width);
    set("--block-height", "fiber", "block_height", v.block_height);
    set("--max-turn", "fiber", "max_turn_deg", v.max_turn);
    set("--max-bend", "fiber", "max_bend_deg", v.max_bend);
    set("--fiber-seed", "fiber", "seed", v.fiber_seed);

    set("--c1", "energy", "c1", v.c1);
    set("--c2", "energy", "c2", v.c2);
    set("--A0", "energy", "A0", v.A0);
    set("--A1", "energy", "A1", v.A1);
    set("--A2", "energy", "A2", v.A2);
    set("--Gg", "energy", "Gg", v.Gg);
    set("--gravity-sign", "energy", "gravity_sign", v.gravity_sign);
    set("--lambda", "energy", "lambda", v.lambda);
    set("--v-fluid0", "energy", "v_fluid0", v.v_fluid0);

    set("--solver", "solver", "type", v.solver);
    if (cmd->count("--reservoir-depth"))
        j["solver"]["reservoir"]["depth_layers"] = v.reservoir_depth;
    if (cmd->count("--refill") || cmd->count("--no-refill"))
        j["solver"]["reservoir"]["refill_enabled"] = v.refill;

    if (cmd->count("--pop")) j["solver"]["ga"]["population_size"] = v.pop;
    if (cmd->count("--generations"))
        j["solver"]["ga"]["generations_per_inner_iteration"] = v.generations;
    if (cmd->count("--crossover")) j["solver"]["ga"]["crossover_rate"] = v.crossover;
    if (cmd->count("--mutation")) j["solver"]["ga"]["mutation_rate"] = v.mutation;
    if (cmd->count("--tournament")) j["solver"]["ga"]["tournament_size"] = v.tournament;
    if (cmd->count("--elitism")) j["solver"]["ga"]["elitism_count"] = v.elitism;
    if (cmd->count("--inner-iterations"))
        j["solver"]["ga"]["inner_iterations_per_epoch"] = v.inner;
    if (cmd->count("--rel-tol")) j["solver"]["ga"]["convergence_rel_tol"] = v.rel_tol;
    if (cmd->count("--max-outer"))
        j["solver"]["ga"]["max_outer_iterations"] = v.max_outer;
    if (cmd->count("--ga-seed")) j["solver"]["ga"]["seed"] = v.ga_seed;

    set("--out", "output", "directory", v.out_dir);
    if (cmd->count("--format")) j["output"]["formats"] = v.formats;

    return inkseep::config_from_json(j);
}

int cmd_fibergen(const CLI::App* cmd, const ConfigCli& v) {
    const RunConfig config = resolve_config(cmd, v);
    const inkseep::Grid grid = config.make_grid();
    const inkseep::FiberStructure structure = inkseep::generate(config.fiber_params());
    const inkseep::BinaryField phi = inkseep::voxelize(structure, grid);

    std::filesystem::create_directories(config.output_directory);
    const auto path = [&](const char* name) {
        return (std::filesystem::path(config.output_directory) / name).string();
    };
    inkseep::write_json_file(path("structure.json"),
                             inkseep::structure_to_json(structure));
    if (config.write_ivf1) inkseep::write_ivf1(path("phi.ivf1"), phi, "phi");
    if (config.write_vtk) inkseep::write_vtk(path("phi.vtk"), phi, "phi");
    std::cout << "fibers: " << structure.fibers.size()
              << "\nporosity: " << inkseep::porosity(phi, grid)
              << "\noutput: " << config.output_directory << "\n";
    return 0;
}

int cmd_solve(const CLI::App* cmd, const ConfigCli& v) {
    const RunConfig config = resolve_config(cmd, v);
    const inkseep::PipelineResult result = inkseep::run_pipeline(config);
    std::cout << "solver: " << config.solver_type
              << "\nconverged: " << (result.converged ? "yes" : "no")
              << "\nvolume_error: " << result.volume_error << "\nE_t: "
              << result.manifest["results"]["E_t"].get<double>()
              << "\nfill_fraction: "
              << result.manifest["results"]["free_space_fill_fraction"].get<double>()
              << "\noutput: " << config.output_directory << "\n";
    return result.exit_code;
}

int cmd_report(const std::string& phi_path, const std::string& sigma_path,
               const std::string& out_dir, double v_fluid0) {
    const inkseep::LoadedField phi = inkseep::read_ivf1(phi_path);
    const inkseep::LoadedField sigma = inkseep::read_ivf1(sigma_path);
    if (!(phi.field.grid() == sigma.field.grid()))
        throw inkseep::config_error("report: phi and sigma grids differ");
    const inkseep::Grid& grid = phi.field.grid();

    const inkseep::SaturationProfile profile =
        inkseep::saturation_profile(sigma.field, phi.field, grid);
    std::filesystem::create_directories(out_dir);
    inkseep::write_saturation_csv(
        (std::filesystem::path(out_dir) / "saturation.csv").string(), profile);

    inkseep::EnergyParams params;
    params.v0 = static_cast<double>(grid.cell_count());
    params.v_fluid0 = v_fluid0;
    std::cout << "v_fluid: " << sigma.field.count_ones()
              << "\nvolume_error: " << inkseep::volume_error(sigma.field, params)
              << "\nfree_space_fill_fraction: "
              << inkseep::free_space_fill_fraction(sigma.field, phi.field, grid)
              << "\nfiber_adjacency_fraction: "
              << inkseep::fiber_adjacency_fraction(sigma.field, phi.field, grid)
              << "\nporosity: " << inkseep::porosity(phi.field, grid)
              << "\nsaturation_csv: "
              << (std::filesystem::path(out_dir) / "saturation.csv").string() << "\n";
    return 0;
}

int cmd_export(const std::string& field_path, std::string vtk_path) {
    const inkseep::LoadedField loaded = inkseep::read_ivf1(field_path);
    if (vtk_path.empty())
        vtk_path = std::filesystem::path(field_path).replace_extension(".vtk").string();
    inkseep::write_vtk(vtk_path, loaded.field, loaded.name);
    std::cout << "wrote " << vtk_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-volume ink seepage simulator on voxelized fiber structures"};
    app.require_subcommand(1);

    ConfigCli fibergen_cli, solve_cli;
    CLI::App* fibergen = app.add_subcommand("fibergen", "generate a fiber structure and its phi field");
    add_config_options(fibergen, fibergen_cli);
    CLI::App* solve = app.add_subcommand("solve", "run the full pipeline (fibergen + solver + reports)");
    add_config_options(solve, solve_cli);

    std::string report_phi, report_sigma, report_out = ".";
    double report_v_fluid0 = 0.0;
    CLI::App* report = app.add_subcommand("report", "saturation profile and volume error from saved fields");
    report->add_option("--phi", report_phi, "phi IVF1 file")->required();
    report->add_option("--sigma", report_sigma, "sigma IVF1 file")->required();
    report->add_option("--out,-o", report_out, "output directory");
    report->add_option("--v-fluid0", report_v_fluid0, "target ink volume (cells)");

    std::string export_field, export_vtk;
    CLI::App* exporter = app.add_subcommand("export", "convert an IVF1 field to legacy VTK");
    exporter->add_option("--field", export_field, "IVF1 file")->required();
    exporter->add_option("--vtk", export_vtk, "VTK output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (fibergen->parsed()) return cmd_fibergen(fibergen, fibergen_cli);
        if (solve->parsed()) return cmd_solve(solve, solve_cli);
        if (report->parsed())
            return cmd_report(report_phi, report_sigma, report_out, report_v_fluid0);
        if (exporter->parsed()) return cmd_export(export_field, export_vtk);
    } catch (const inkseep::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const inkseep::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
