#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "inkseep/energy.hpp"
#include "inkseep/grid.hpp"
#include "inkseep/random.hpp"

namespace inkseep {

/// Finite-volume boundary: the depth_layers reservoir layers nearest the
/// sheet surface hold the dispensed ink and are topped up from an imaginary
/// source until the budget v_fluid0 has been dispensed.
struct ReservoirSpec {
    int depth_layers = 0;
    bool refill_enabled = true;

    void validate(const Grid& grid) const {
        if (depth_layers < 0 || depth_layers > grid.nz_reservoir())
            throw std::invalid_argument(
                "ReservoirSpec: depth_layers must be in [0, nz_reservoir]");
    }
};

struct GaConfig {
    int population_size = 32;
    int generations_per_inner_iteration = 20;
    double crossover_rate = 0.9;
    double mutation_rate = -1.0;  // negative: one over chromosome length
    int tournament_size = 3;
    int elitism_count = 1;
    int inner_iterations_per_epoch = 100;
    double convergence_rel_tol = 0.001;
    int max_outer_iterations = 500;
    std::uint64_t seed = 1;

    void validate() const {
        if (population_size < 2)
            throw std::invalid_argument("GaConfig: population_size must be >= 2");
        if (generations_per_inner_iteration < 1)
            throw std::invalid_argument("GaConfig: generations must be >= 1");
        if (crossover_rate < 0 || crossover_rate > 1)
            throw std::invalid_argument("GaConfig: crossover_rate must be in [0,1]");
        if (mutation_rate > 1)
            throw std::invalid_argument("GaConfig: mutation_rate must be <= 1");
        if (tournament_size < 1)
            throw std::invalid_argument("GaConfig: tournament_size must be >= 1");
        if (elitism_count < 1)
            throw std::invalid_argument("GaConfig: elitism_count must be >= 1");
        if (inner_iterations_per_epoch < 1)
            throw std::invalid_argument("GaConfig: inner_iterations_per_epoch must be >= 1");
        if (!(convergence_rel_tol > 0))
            throw std::invalid_argument("GaConfig: convergence_rel_tol must be > 0");
        if (max_outer_iterations < 1)
            throw std::invalid_argument("GaConfig: max_outer_iterations must be >= 1");
    }
};

struct TraceRow {
    int outer = 0;
    int inner = 0;
    double E_t = 0.0;
    double E_g = 0.0;
    double E_c = 0.0;
    double E_a = 0.0;
    double E_V = 0.0;
    std::int64_t v_fluid = 0;
    double seconds = 0.0;
    /// Epoch-frozen objective right after the apply step of this iteration
    /// (before any refill). Non-increasing within an epoch.
    double frozen_fitness = 0.0;
};

using EnergyTrace = std::vector<TraceRow>;

struct SolverState {
    BinaryField sigma;
    SumCache cache;
    std::int64_t dispensed_volume = 0;
    int outer_iteration = 0;
    int inner_iteration = 0;
    EnergyTrace trace;
    std::vector<std::string> warnings;

    /// Per-cell cost of turning the cell to ink under the epoch snapshot of
    /// S1/S2 (the quasi-linear coefficients). Rebuilt at epoch boundaries.
    std::vector<double> frozen_w;

    // running interaction terms, kept incrementally and re-anchored at
    // epoch boundaries
    double E_g = 0.0;
    double E_c = 0.0;
    double E_a = 0.0;

    SolverState(const Grid& grid) : sigma(grid) {}
};

namespace detail {

/// W_i = 2(Gg z - A0 phi - A1 F1 - A2 F2) - 4 c1 S1 - 4 c2 S2: the exact
/// energy change of flipping cell i empty -> ink while every neighbor keeps
/// its snapshot value (volume term excluded; it is handled in closed form).
inline void rebuild_frozen_coeffs(SolverState& state, const BinaryField& phi,
                                  const EnergyParams& params) {
    const Grid& grid = state.sigma.grid();
    const std::size_t n = static_cast<std::size_t>(grid.cell_count());
    state.frozen_w.resize(n);
    for (CellIndex i = 0; i < grid.cell_count(); ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        state.frozen_w[k] =
            2.0 * (params.Gg * grid.z_of_cell(i) - params.A0 * phi[i] -
                   params.A1 * state.cache.f1[k] - params.A2 * state.cache.f2[k]) -
            4.0 * params.c1 * state.cache.s1[k] - 4.0 * params.c2 * state.cache.s2[k];
    }
}

/// Flips one cell, keeping the cache and the running interaction terms
/// exact. Callers only flip pore cells, so the A0*phi term never moves.
inline void set_cell(SolverState& state, const EnergyParams& params, CellIndex i,
                     bool value) {
    if (state.sigma[i] == (value ? 1 : 0)) return;
    const std::size_t k = static_cast<std::size_t>(i);
    const double d = value ? 2.0 : -2.0;  // spin change
    const Grid& grid = state.sigma.grid();
    state.E_g += params.Gg * d * grid.z_of_cell(i);
    state.E_c -= 2.0 * params.c1 * d * state.cache.s1[k] +
                 2.0 * params.c2 * d * state.cache.s2[k];
    state.E_a -= d * (params.A1 * state.cache.f1[k] + params.A2 * state.cache.f2[k]);
    state.sigma.set(i, value);
    cache_apply_flip(state.cache, grid, i, value);
}

} // namespace detail

/// Initial solver state: paper cells empty, reservoir filled lowest-first
/// with min(reservoir capacity, v_fluid0) cells of ink.
inline SolverState init_state(const Grid& grid, const BinaryField& phi,
                              const ReservoirSpec& reservoir,
                              const EnergyParams& params) {
    reservoir.validate(grid);
    params.validate();
    SolverState state(grid);
    const std::int64_t budget = std::llround(params.v_fluid0);
    const std::int64_t capacity =
        static_cast<std::int64_t>(reservoir.depth_layers) * grid.nx() * grid.ny();
    if (budget > capacity && !reservoir.refill_enabled)
        state.warnings.push_back(
            "v_fluid0 exceeds reservoir capacity and refilling is disabled; the "
            "full budget cannot be dispensed");

    const int first_layer = grid.nz_reservoir() - reservoir.depth_layers;
    std::int64_t filled = 0;
    for (int iz = first_layer; iz < grid.nz_reservoir() && filled < budget; ++iz)
        for (int iy = 0; iy < grid.ny() && filled < budget; ++iy)
            for (int ix = 0; ix < grid.nx() && filled < budget; ++ix) {
                state.sigma.set(grid.index(ix, iy, iz), true);
                ++filled;
            }
    state.dispensed_volume = filled;
    state.cache = make_sum_cache(state.sigma, phi, grid);
    detail::rebuild_frozen_coeffs(state, phi, params);
    return state;
}

/// Cells on the ink/air interface: pore ink cells with at least one empty
/// pore first-layer neighbor, and pore empty cells with at least one ink
/// neighbor. Ascending index order.
inline std::vector<CellIndex> extract_interface(const SolverState& state,
                                                const BinaryField& phi) {
    const Grid& grid = state.sigma.grid();
    std::vector<CellIndex> cells;
    for (CellIndex i = 0; i < grid.cell_count(); ++i) {
        if (phi[i]) continue;
        bool boundary = false;
        if (state.sigma[i]) {
            grid.for_each_n1(i, [&](CellIndex j) {
                if (!boundary && !state.sigma[j] && !phi[j]) boundary = true;
            });
        } else {
            grid.for_each_n1(i, [&](CellIndex j) {
                if (!boundary && state.sigma[j]) boundary = true;
            });
        }
        if (boundary) cells.push_back(i);
    }
    return cells;
}

struct GaOutcome {
    std::vector<std::uint8_t> best;
    double best_fitness = 0.0;
    double incumbent_fitness = 0.0;
};

/// Minimizes the epoch objective over the chromosome bits: frozen linear
/// coefficients plus the exact closed-form volume energy for the implied
/// total. Assignments implying more ink than the dispensed budget allows
/// are infeasible whenever the volume penalty is active. The incumbent is
/// seeded into the population and elitism preserves the best individual,
/// so the result never scores worse than the incumbent.
inline GaOutcome ga_minimize(const std::vector<CellIndex>& cells,
                             const SolverState& state, const PairwiseModel& model,
                             const GaConfig& cfg, RandomSource& rng) {
    GaOutcome out;
    if (cells.empty()) return out;
    const std::size_t len = cells.size();
    const double mut =
        cfg.mutation_rate < 0 ? 1.0 / static_cast<double>(len) : cfg.mutation_rate;

    std::vector<double> w(len);
    std::vector<std::uint8_t> incumbent(len);
    std::int64_t incumbent_ones = 0;
    for (std::size_t k = 0; k < len; ++k) {
        w[k] = state.frozen_w[static_cast<std::size_t>(cells[k])];
        incumbent[k] = state.sigma[cells[k]];
        incumbent_ones += incumbent[k];
    }
    const std::int64_t outside = state.cache.ink_total - incumbent_ones;
    const std::int64_t budget = std::llround(model.v_fluid0);
    const bool capped = model.lambda > 0.0;

    EnergyParams vol;
    vol.lambda = model.lambda;
    vol.v0 = model.v0;
    vol.v_fluid0 = model.v_fluid0;

    const auto fitness = [&](const std::vector<std::uint8_t>& bits) {
        double lin = 0.0;
        std::int64_t ones = 0;
        for (std::size_t k = 0; k < len; ++k)
            if (bits[k]) {
                lin += w[k];
                ++ones;
            }
        const std::int64_t total = outside + ones;
        if (capped && total > budget) return std::numeric_limits<double>::infinity();
        return lin + volume_energy(static_cast<double>(total), vol);
    };

    // Greedy volume repair: move the implied total toward the budget by
    // flipping the cheapest genes first.
    const auto repaired = [&]() {
        std::vector<std::uint8_t> bits = incumbent;
        std::int64_t total = outside + incumbent_ones;
        std::vector<std::size_t> order(len);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return w[a] < w[b]; });
        for (std::size_t idx = 0; idx < len && total < budget; ++idx)
            if (!bits[order[idx]]) {
                bits[order[idx]] = 1;
                ++total;
            }
        for (std::size_t idx = len; idx-- > 0 && total > budget;)
            if (bits[order[idx]]) {
                bits[order[idx]] = 0;
                --total;
            }
        return bits;
    };

    std::vector<std::vector<std::uint8_t>> pop;
    pop.reserve(static_cast<std::size_t>(cfg.population_size));
    pop.push_back(incumbent);
    pop.push_back(repaired());
    const double seed_mut = std::min(1.0, 4.0 / static_cast<double>(len));
    while (pop.size() < static_cast<std::size_t>(cfg.population_size)) {
        std::vector<std::uint8_t> ind = pop.size() % 2 ? incumbent : pop[1];
        for (std::size_t k = 0; k < len; ++k)
            if (rng.next_double() < seed_mut) ind[k] ^= 1;
        pop.push_back(std::move(ind));
    }

    std::vector<double> fit(pop.size());
    for (std::size_t p = 0; p < pop.size(); ++p) fit[p] = fitness(pop[p]);
    out.incumbent_fitness = fit[0];
    std::size_t best_idx = 0;
    for (std::size_t p = 1; p < pop.size(); ++p)
        if (fit[p] < fit[best_idx]) best_idx = p;
    out.best = pop[best_idx];
    out.best_fitness = fit[best_idx];

    std::vector<std::size_t> order(pop.size());
    const auto tournament = [&]() {
        std::size_t winner = static_cast<std::size_t>(rng.next_below(pop.size()));
        for (int t = 1; t < cfg.tournament_size; ++t) {
            const std::size_t c = static_cast<std::size_t>(rng.next_below(pop.size()));
            if (fit[c] < fit[winner] || (fit[c] == fit[winner] && c < winner))
                winner = c;
        }
        return winner;
    };

    std::vector<std::vector<std::uint8_t>> next;
    next.reserve(pop.size());
    for (int g = 0; g < cfg.generations_per_inner_iteration; ++g) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return fit[a] < fit[b];
        });
        next.clear();
        for (int e = 0; e < cfg.elitism_count && e < static_cast<int>(pop.size()); ++e)
            next.push_back(pop[order[static_cast<std::size_t>(e)]]);
        while (next.size() < pop.size()) {
            const std::size_t pa = tournament();
            std::vector<std::uint8_t> child = pop[pa];
            if (rng.next_double() < cfg.crossover_rate) {
                const std::size_t pb = tournament();
                for (std::size_t k = 0; k < len; ++k)
                    if (rng.next_bool()) child[k] = pop[pb][k];
            }
            for (std::size_t k = 0; k < len; ++k)
                if (rng.next_double() < mut) child[k] ^= 1;
            next.push_back(std::move(child));
        }
        pop.swap(next);
        for (std::size_t p = 0; p < pop.size(); ++p) {
            fit[p] = fitness(pop[p]);
            if (fit[p] < out.best_fitness) {
                out.best_fitness = fit[p];
                out.best = pop[p];
            }
        }
    }
    return out;
}

/// Tops the reservoir back up, lowest cells first, while ink is below the
/// budget and part of the budget is still undispensed.
inline void refill(SolverState& state, const ReservoirSpec& reservoir,
                   const EnergyParams& params) {
    const Grid& grid = state.sigma.grid();
    const std::int64_t budget = std::llround(params.v_fluid0);
    if (state.cache.ink_total >= budget || state.dispensed_volume >= budget) return;
    const int first_layer = grid.nz_reservoir() - reservoir.depth_layers;
    for (int iz = first_layer; iz < grid.nz_reservoir(); ++iz)
        for (int iy = 0; iy < grid.ny(); ++iy)
            for (int ix = 0; ix < grid.nx(); ++ix) {
                if (state.cache.ink_total >= budget ||
                    state.dispensed_volume >= budget)
                    return;
                const CellIndex i = grid.index(ix, iy, iz);
                if (!state.sigma[i]) {
                    detail::set_cell(state, params, i, true);
                    ++state.dispensed_volume;
                }
            }
}

struct SolveReport {
    BinaryField sigma;
    EnergyTrace trace;
    bool converged = false;
    int outer_iterations = 0;
    std::int64_t volume_error = 0;
    EnergyBreakdown final_energy;
    std::vector<std::string> warnings;

    SolveReport(const Grid& grid) : sigma(grid) {}
};

/// The full solver loop: epochs of inner iterations (interface extraction,
/// GA minimization under the frozen S1/S2 snapshot, apply-if-not-worse,
/// refill), an S1/S2 snapshot update per epoch, and termination when the
/// total energy changes by less than convergence_rel_tol between epochs.
inline SolveReport run(const BinaryField& phi, const EnergyParams& params,
                       const ReservoirSpec& reservoir, const GaConfig& cfg,
                       const Grid& grid) {
    cfg.validate();
    SolverState state = init_state(grid, phi, reservoir, params);
    const PairwiseModel model = pairwise_model(phi, params, grid);
    RandomSource rng(cfg.seed);
    const auto t0 = std::chrono::steady_clock::now();
    const auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    };

    EnergyBreakdown e = energy_direct(state.sigma, phi, params, grid);
    state.E_g = e.E_g;
    state.E_c = e.E_c;
    state.E_a = e.E_a;

    const auto frozen_objective = [&] {
        double j = 0.0;
        for (CellIndex i = 0; i < grid.cell_count(); ++i)
            if (state.sigma[i]) j += state.frozen_w[static_cast<std::size_t>(i)];
        return j + volume_energy(static_cast<double>(state.cache.ink_total), params);
    };
    double frozen_j = frozen_objective();

    double prev_epoch_energy = e.E_t;
    bool converged = false;

    while (state.outer_iteration < cfg.max_outer_iterations && !converged) {
        ++state.outer_iteration;
        for (state.inner_iteration = 1;
             state.inner_iteration <= cfg.inner_iterations_per_epoch;
             ++state.inner_iteration) {
            const std::vector<CellIndex> cells = extract_interface(state, phi);
            if (!cells.empty()) {
                const GaOutcome out = ga_minimize(cells, state, model, cfg, rng);
                if (out.best_fitness <= out.incumbent_fitness) {
                    for (std::size_t k = 0; k < cells.size(); ++k)
                        detail::set_cell(state, params, cells[k], out.best[k] != 0);
                    frozen_j += out.best_fitness - out.incumbent_fitness;
                }
            }
            const double row_frozen = frozen_j;
            if (reservoir.refill_enabled) {
                const std::int64_t before = state.cache.ink_total;
                refill(state, reservoir, params);
                if (state.cache.ink_total != before) frozen_j = frozen_objective();
            }
            TraceRow row;
            row.outer = state.outer_iteration;
            row.inner = state.inner_iteration;
            row.E_g = state.E_g;
            row.E_c = state.E_c;
            row.E_a = state.E_a;
            row.E_V =
                volume_energy(static_cast<double>(state.cache.ink_total), params);
            row.E_t = row.E_g + row.E_c + row.E_a + row.E_V;
            row.v_fluid = state.cache.ink_total;
            row.seconds = elapsed();
            row.frozen_fitness = row_frozen;
            state.trace.push_back(row);
        }

        // epoch boundary: re-anchor the running terms exactly, test
        // convergence, then refresh the S1/S2 snapshot
        e = energy_direct(state.sigma, phi, params, grid);
        state.E_g = e.E_g;
        state.E_c = e.E_c;
        state.E_a = e.E_a;
        const double denom = std::max(std::abs(prev_epoch_energy), 1e-12);
        converged = std::abs(e.E_t - prev_epoch_energy) / denom < cfg.convergence_rel_tol;
        prev_epoch_energy = e.E_t;
        detail::rebuild_frozen_coeffs(state, phi, params);
        frozen_j = frozen_objective();
    }

    SolveReport report(grid);
    report.sigma = state.sigma;
    report.trace = std::move(state.trace);
    report.converged = converged;
    report.outer_iterations = state.outer_iteration;
    report.volume_error =
        std::llabs(state.cache.ink_total - std::llround(params.v_fluid0));
    report.final_energy = e;
    report.warnings = std::move(state.warnings);
    return report;
}

} // namespace inkseep
