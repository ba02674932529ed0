#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "inkseep/grid.hpp"

namespace inkseep {

/// Physical coefficients of the energy functional. Cohesion (c1, c2) acts
/// between fluid cells over the first- and second-layer neighborhoods,
/// adhesion (A0, A1, A2) between fluid and solid, Gg scales the gravity
/// term, and lambda weights the quadratic volume penalty that enforces the
/// finite fluid budget v_fluid0.
struct EnergyParams {
    double c1 = 1.0;
    double c2 = 0.125;
    double A0 = 0.5;
    double A1 = 1.0 / 3.0;
    double A2 = 1.0 / 6.0;
    double Gg = 0.0;
    double lambda = 100.0;
    double v_fluid0 = 0.0;  // target ink volume, in cells
    double v0 = 0.0;        // total cell count of the grid
    double z_max = 0.0;

    void validate() const {
        if (!(c1 > 0)) throw std::invalid_argument("EnergyParams: c1 must be > 0");
        if (c2 < 0 || A0 < 0 || A1 < 0 || A2 < 0)
            throw std::invalid_argument("EnergyParams: coefficients must be >= 0");
        if (lambda < 0) throw std::invalid_argument("EnergyParams: lambda must be >= 0");
        if (v_fluid0 < 0 || v_fluid0 > v0)
            throw std::invalid_argument("EnergyParams: v_fluid0 must be in [0, v0]");
    }
};

/// Reference parameter set: c1 = 1 with the other coefficients scaled off
/// it (c2 = c1/8, Gg = c1/z_max, A0 = c1/2, A1 = 2A0/3, A2 = A1/2,
/// lambda = 100).
inline EnergyParams default_params(const Grid& grid, double v_fluid0) {
    EnergyParams p;
    p.z_max = grid.z_max();
    if (!(p.z_max > 0))
        throw std::invalid_argument("default_params: grid z_max must be > 0");
    p.c1 = 1.0;
    p.c2 = p.c1 / 8.0;
    p.Gg = p.c1 / p.z_max;
    p.A0 = p.c1 / 2.0;
    p.A1 = 2.0 / 3.0 * p.A0;
    p.A2 = 0.5 * p.A1;
    p.lambda = 100.0;
    p.v0 = static_cast<double>(grid.cell_count());
    p.v_fluid0 = v_fluid0;
    p.validate();
    return p;
}

/// Per-term energy values; E_t is always the sum of the four terms.
struct EnergyBreakdown {
    double E_g = 0.0;
    double E_c = 0.0;
    double E_a = 0.0;
    double E_V = 0.0;
    double E_t = 0.0;
    std::int64_t v_fluid = 0;
};

/// Per-cell neighbor sums: F1/F2 are solid counts over N1/N2, S1/S2 are
/// spin sums (2*sigma - 1) over N1/N2, deg1/deg2 the clipped neighborhood
/// sizes. ink_total tracks the current fluid cell count so flip deltas
/// stay O(1).
struct SumCache {
    std::vector<std::int32_t> f1, f2;
    std::vector<std::int32_t> s1, s2;
    std::vector<std::int32_t> deg1, deg2;
    std::int64_t ink_total = 0;
};

inline std::pair<std::vector<std::int32_t>, std::vector<std::int32_t>>
solid_sums(const BinaryField& phi, const Grid& grid) {
    const std::size_t n = static_cast<std::size_t>(grid.cell_count());
    std::vector<std::int32_t> f1(n, 0), f2(n, 0);
    for (CellIndex i = 0; i < static_cast<CellIndex>(n); ++i) {
        if (!phi[i]) continue;
        grid.for_each_n1(i, [&](CellIndex j) { ++f1[static_cast<std::size_t>(j)]; });
        grid.for_each_n2(i, [&](CellIndex j) { ++f2[static_cast<std::size_t>(j)]; });
    }
    return {std::move(f1), std::move(f2)};
}

inline std::pair<std::vector<std::int32_t>, std::vector<std::int32_t>>
ink_sums(const BinaryField& sigma, const Grid& grid) {
    const std::size_t n = static_cast<std::size_t>(grid.cell_count());
    std::vector<std::int32_t> s1(n, 0), s2(n, 0);
    for (CellIndex i = 0; i < static_cast<CellIndex>(n); ++i) {
        const std::int32_t sp = sigma[i] ? 1 : -1;
        grid.for_each_n1(i, [&](CellIndex j) { s1[static_cast<std::size_t>(j)] += sp; });
        grid.for_each_n2(i, [&](CellIndex j) { s2[static_cast<std::size_t>(j)] += sp; });
    }
    return {std::move(s1), std::move(s2)};
}

inline SumCache make_sum_cache(const BinaryField& sigma, const BinaryField& phi,
                               const Grid& grid) {
    SumCache cache;
    auto [f1, f2] = solid_sums(phi, grid);
    cache.f1 = std::move(f1);
    cache.f2 = std::move(f2);
    auto [s1, s2] = ink_sums(sigma, grid);
    cache.s1 = std::move(s1);
    cache.s2 = std::move(s2);
    const std::size_t n = static_cast<std::size_t>(grid.cell_count());
    cache.deg1.assign(n, 0);
    cache.deg2.assign(n, 0);
    for (CellIndex i = 0; i < static_cast<CellIndex>(n); ++i) {
        std::int32_t d1 = 0, d2 = 0;
        grid.for_each_n1(i, [&](CellIndex) { ++d1; });
        grid.for_each_n2(i, [&](CellIndex) { ++d2; });
        cache.deg1[static_cast<std::size_t>(i)] = d1;
        cache.deg2[static_cast<std::size_t>(i)] = d2;
    }
    cache.ink_total = sigma.count_ones();
    return cache;
}

/// Propagates a single sigma flip into the cache. The caller flips the
/// field itself; `new_value` is the value after the flip.
inline void cache_apply_flip(SumCache& cache, const Grid& grid, CellIndex i,
                             bool new_value) {
    const std::int32_t d = new_value ? 2 : -2;  // spin change
    grid.for_each_n1(i, [&](CellIndex j) { cache.s1[static_cast<std::size_t>(j)] += d; });
    grid.for_each_n2(i, [&](CellIndex j) { cache.s2[static_cast<std::size_t>(j)] += d; });
    cache.ink_total += new_value ? 1 : -1;
}

inline double volume_energy(double ink_total, const EnergyParams& params) {
    if (params.lambda == 0.0) return 0.0;
    const double d = ink_total - params.v_fluid0;
    return params.lambda * d * d / params.v0;
}

/// Term-by-term evaluation of the full energy in the spin form.
inline EnergyBreakdown energy_direct(const BinaryField& sigma,
                                     const BinaryField& phi,
                                     const EnergyParams& params,
                                     const Grid& grid) {
    if (!(sigma.grid() == grid) || !(phi.grid() == grid))
        throw std::invalid_argument("energy_direct: fields on a different grid");
    auto [s1, s2] = ink_sums(sigma, grid);
    auto [f1, f2] = solid_sums(phi, grid);
    EnergyBreakdown e;
    for (CellIndex i = 0; i < grid.cell_count(); ++i) {
        const double sp = sigma.spin(i);
        const std::size_t k = static_cast<std::size_t>(i);
        e.E_g += params.Gg * sp * grid.z_of_cell(i);
        e.E_c -= params.c1 * sp * s1[k] + params.c2 * sp * s2[k];
        e.E_a -= params.A0 * sp * phi[i] + params.A1 * sp * f1[k] +
                 params.A2 * sp * f2[k];
        e.v_fluid += sigma[i];
    }
    e.E_V = volume_energy(static_cast<double>(e.v_fluid), params);
    e.E_t = e.E_g + e.E_c + e.E_a + e.E_V;
    return e;
}

/// The energy rewritten over sigma in {0,1}: a per-cell linear coefficient
/// d1, directed neighbor pairs with constant weights v1/v2, and the global
/// volume coupling v3 kept in closed form instead of as all-pairs edges.
/// energy_direct(sigma).E_t - energy_pairwise(sigma) == constant_offset for
/// every sigma.
struct PairwiseModel {
    Grid grid{1, 1, 1, 0, 1.0};
    std::vector<double> d1;
    std::vector<std::pair<std::int32_t, std::int32_t>> n1_pairs;  // directed
    std::vector<std::pair<std::int32_t, std::int32_t>> n2_pairs;  // directed
    double v1 = 0.0;  // -4*c1, per directed N1 pair
    double v2 = 0.0;  // -4*c2, per directed N2 pair
    double v3 = 0.0;  // lambda/v0, applied analytically
    double c1 = 0.0;
    double c2 = 0.0;
    double lambda = 0.0;
    double v_fluid0 = 0.0;
    double v0 = 0.0;
    double constant_offset = 0.0;

    /// Linear coefficient without the volume part (the hatted constant of
    /// the reformulation; equals d1 when lambda = 0).
    double d1_interaction(CellIndex i) const {
        return d1[static_cast<std::size_t>(i)] - lambda * (1.0 - 2.0 * v_fluid0) / v0;
    }
};

inline PairwiseModel pairwise_model(const BinaryField& phi,
                                    const EnergyParams& params,
                                    const Grid& grid) {
    PairwiseModel m;
    m.grid = grid;
    m.v1 = -4.0 * params.c1;
    m.v2 = -4.0 * params.c2;
    m.v0 = params.v0;
    m.v3 = params.lambda / params.v0;
    m.c1 = params.c1;
    m.c2 = params.c2;
    m.lambda = params.lambda;
    m.v_fluid0 = params.v_fluid0;

    auto [f1, f2] = solid_sums(phi, grid);
    const double vol_linear = params.lambda * (1.0 - 2.0 * params.v_fluid0) / params.v0;
    const std::size_t n = static_cast<std::size_t>(grid.cell_count());
    m.d1.resize(n);
    m.n1_pairs.reserve(n * 26);
    m.n2_pairs.reserve(n * 98);
    double unary_sum = 0.0;
    double pair_constant = 0.0;
    for (CellIndex i = 0; i < grid.cell_count(); ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        std::int32_t deg1 = 0, deg2 = 0;
        grid.for_each_n1(i, [&](CellIndex j) {
            ++deg1;
            m.n1_pairs.emplace_back(static_cast<std::int32_t>(i),
                                    static_cast<std::int32_t>(j));
        });
        grid.for_each_n2(i, [&](CellIndex j) {
            ++deg2;
            m.n2_pairs.emplace_back(static_cast<std::int32_t>(i),
                                    static_cast<std::int32_t>(j));
        });
        // clipped counts stand in for the interior 26/98 so the two energy
        // forms agree exactly at the boundary
        const double b = params.Gg * grid.z_of_cell(i) - params.A0 * phi[i] -
                         params.A1 * f1[k] - params.A2 * f2[k];
        m.d1[k] = 2.0 * (b + 2.0 * (params.c1 * deg1 + params.c2 * deg2)) + vol_linear;
        unary_sum += b;
        pair_constant += params.c1 * deg1 + params.c2 * deg2;
    }
    // sigma-independent remainder dropped by the reformulation
    m.constant_offset = -unary_sum - pair_constant +
                        params.lambda * params.v_fluid0 * params.v_fluid0 / params.v0;
    return m;
}

inline double energy_pairwise(const BinaryField& sigma, const PairwiseModel& m) {
    double e = 0.0;
    for (CellIndex i = 0; i < static_cast<CellIndex>(m.d1.size()); ++i)
        if (sigma[i]) e += m.d1[static_cast<std::size_t>(i)];
    double pair1 = 0.0;
    for (const auto& [i, j] : m.n1_pairs)
        pair1 += static_cast<double>(sigma[i] & sigma[j]);
    double pair2 = 0.0;
    for (const auto& [i, j] : m.n2_pairs)
        pair2 += static_cast<double>(sigma[i] & sigma[j]);
    e += m.v1 * pair1 + m.v2 * pair2;
    const double n = static_cast<double>(sigma.count_ones());
    e += m.v3 * (n * n - n);
    return e;
}

/// O(1) energy change for flipping cell i, given a cache consistent with
/// sigma. Stale caches are the caller's problem.
inline double flip_delta(const BinaryField& sigma, CellIndex i,
                         const SumCache& cache, const PairwiseModel& m) {
    const std::size_t k = static_cast<std::size_t>(i);
    const double d = sigma[i] ? -1.0 : 1.0;
    const double ink1 = 0.5 * (cache.s1[k] + cache.deg1[k]);
    const double ink2 = 0.5 * (cache.s2[k] + cache.deg2[k]);
    const double n = static_cast<double>(cache.ink_total);
    return d * m.d1[k] + 2.0 * m.v1 * d * ink1 + 2.0 * m.v2 * d * ink2 +
           m.v3 * d * (2.0 * n + d - 1.0);
}

} // namespace inkseep
