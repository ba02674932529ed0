#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "inkseep/analysis.hpp"
#include "inkseep/config.hpp"
#include "inkseep/fiber.hpp"
#include "inkseep/gasolver.hpp"
#include "inkseep/io.hpp"
#include "inkseep/mincut.hpp"

namespace inkseep {

inline constexpr const char* kArtifactName = "inkseep";
inline constexpr const char* kArtifactVersion = "0.1.0";

inline nlohmann::json structure_to_json(const FiberStructure& structure) {
    nlohmann::json j;
    j["params"] = {{"count", structure.params.fiber_count},
                   {"blocks_per_fiber", structure.params.blocks_per_fiber},
                   {"block_length", structure.params.block_length},
                   {"block_width", structure.params.block_width},
                   {"block_height", structure.params.block_height},
                   {"max_turn_deg", structure.params.max_turn_deg},
                   {"max_bend_deg", structure.params.max_bend_deg},
                   {"surface_width", structure.params.surface_width},
                   {"surface_depth", structure.params.surface_depth},
                   {"seed", structure.params.seed},
                   {"rng", kRandomSourceId}};
    nlohmann::json fibers = nlohmann::json::array();
    for (const Fiber& fiber : structure.fibers) {
        nlohmann::json blocks = nlohmann::json::array();
        for (const Block& b : fiber.blocks)
            blocks.push_back({{"center", {b.center.x, b.center.y, b.center.z}},
                              {"angle_deg", b.angle_deg},
                              {"tilt_deg", b.tilt_deg},
                              {"dims", {b.dims.x, b.dims.y, b.dims.z}}});
        fibers.push_back({{"blocks", std::move(blocks)}});
    }
    j["fibers"] = std::move(fibers);
    return j;
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw io_error("write failed: " + path);
}

struct PipelineResult {
    int exit_code = 0;  // 0 ok, 3 solver did not converge
    nlohmann::json manifest;
    BinaryField phi{Grid{1, 1, 1, 0, 1.0}};
    BinaryField sigma{Grid{1, 1, 1, 0, 1.0}};
    EnergyTrace trace;
    bool converged = true;
    std::int64_t volume_error = 0;
};

/// Generation -> solve -> report, with every artifact written under
/// config.output_directory and a manifest that pins the resolved config,
/// seeds, and generator id, so a run is reproducible from the manifest
/// alone.
inline PipelineResult run_pipeline(const RunConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    const Grid grid = config.make_grid();
    const EnergyParams params = config.energy_params(grid);

    const FiberStructure structure = generate(config.fiber_params());
    BinaryField phi = voxelize(structure, grid);

    PipelineResult result;
    result.phi = phi;

    std::vector<std::string> warnings;
    EnergyBreakdown energy;
    if (config.solver_type == "mincut") {
        InfiniteVolumeSolution solution = solve_infinite(phi, params, grid);
        result.sigma = std::move(solution.sigma);
        energy = solution.breakdown;
        TraceRow row;
        row.E_t = energy.E_t;
        row.E_g = energy.E_g;
        row.E_c = energy.E_c;
        row.E_a = energy.E_a;
        row.E_V = energy.E_V;
        row.v_fluid = energy.v_fluid;
        row.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        result.trace.push_back(row);
    } else {
        SolveReport report = run(phi, params, config.reservoir, config.ga, grid);
        result.sigma = std::move(report.sigma);
        result.trace = std::move(report.trace);
        result.converged = report.converged;
        result.volume_error = report.volume_error;
        energy = report.final_energy;
        warnings = std::move(report.warnings);
        if (!report.converged) result.exit_code = 3;
    }

    const SaturationProfile profile = saturation_profile(result.sigma, phi, grid);
    const double fill = free_space_fill_fraction(result.sigma, phi, grid);
    const double adjacency = fiber_adjacency_fraction(result.sigma, phi, grid);

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(config.output_directory, ec);
    if (ec)
        throw io_error("cannot create output directory '" + config.output_directory +
                       "': " + ec.message());
    const auto out_path = [&](const char* name) {
        return (fs::path(config.output_directory) / name).string();
    };

    nlohmann::json files = nlohmann::json::object();
    write_json_file(out_path("structure.json"), structure_to_json(structure));
    files["structure"] = "structure.json";
    if (config.write_ivf1) {
        write_ivf1(out_path("phi.ivf1"), phi, "phi");
        write_ivf1(out_path("sigma.ivf1"), result.sigma, "sigma");
        files["phi"] = "phi.ivf1";
        files["sigma"] = "sigma.ivf1";
    }
    if (config.write_vtk) {
        write_vtk(out_path("phi.vtk"), phi, "phi");
        write_vtk(out_path("sigma.vtk"), result.sigma, "sigma");
        files["phi_vtk"] = "phi.vtk";
        files["sigma_vtk"] = "sigma.vtk";
    }
    if (config.write_csv) {
        write_trace_csv(out_path("trace.csv"), result.trace);
        write_saturation_csv(out_path("saturation.csv"), profile);
        files["trace"] = "trace.csv";
        files["saturation"] = "saturation.csv";
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    nlohmann::json manifest;
    manifest["artifact"] = kArtifactName;
    manifest["version"] = kArtifactVersion;
    manifest["rng"] = kRandomSourceId;
    manifest["config"] = config_to_json(config);
    manifest["results"] = {
        {"solver", config.solver_type},
        {"converged", result.converged},
        {"volume_error", result.volume_error},
        {"v_fluid", energy.v_fluid},
        {"E_t", energy.E_t},
        {"E_g", energy.E_g},
        {"E_c", energy.E_c},
        {"E_a", energy.E_a},
        {"E_V", energy.E_V},
        {"porosity", porosity(phi, grid)},
        {"free_space_fill_fraction", fill},
        {"fiber_adjacency_fraction", adjacency},
        {"gravity_sign", config.gravity_sign},
        {"wall_seconds", wall}};
    if (config.solver_type == "ga") {
        manifest["results"]["outer_iterations"] =
            result.trace.empty() ? 0 : result.trace.back().outer;
    }
    manifest["files"] = std::move(files);
    manifest["warnings"] = warnings;
    write_json_file(out_path("manifest.json"), manifest);
    result.manifest = std::move(manifest);
    return result;
}

} // namespace inkseep
