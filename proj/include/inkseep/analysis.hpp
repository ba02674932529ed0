#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "inkseep/energy.hpp"
#include "inkseep/grid.hpp"

namespace inkseep {

/// |sum(sigma) - v_fluid0|, the control parameter reported at the end of a
/// finite-volume run.
inline std::int64_t volume_error(const BinaryField& sigma,
                                 const EnergyParams& params) {
    return std::llabs(sigma.count_ones() - std::llround(params.v_fluid0));
}

struct SaturationRow {
    double z = 0.0;
    std::int64_t free_cells = 0;
    std::int64_t ink_cells = 0;
    double saturation = 0.0;  // ink/free, 0/0 -> 0
};

struct SaturationProfile {
    std::vector<SaturationRow> rows;  // one per grid layer, ascending z
};

inline SaturationProfile saturation_profile(const BinaryField& sigma,
                                            const BinaryField& phi,
                                            const Grid& grid) {
    check_same_grid(sigma, phi);
    SaturationProfile profile;
    profile.rows.resize(static_cast<std::size_t>(grid.nz()));
    for (int iz = 0; iz < grid.nz(); ++iz)
        profile.rows[static_cast<std::size_t>(iz)].z = grid.z_of_layer(iz);
    for (CellIndex i = 0; i < grid.cell_count(); ++i) {
        SaturationRow& row = profile.rows[static_cast<std::size_t>(grid.coords(i).iz)];
        if (!phi[i]) ++row.free_cells;
        row.ink_cells += sigma[i];
    }
    for (SaturationRow& row : profile.rows)
        row.saturation = row.free_cells == 0
                             ? 0.0
                             : static_cast<double>(row.ink_cells) /
                                   static_cast<double>(row.free_cells);
    return profile;
}

/// Fraction of ink cells with at least one solid first-layer neighbor; 0
/// when there is no ink.
inline double fiber_adjacency_fraction(const BinaryField& sigma,
                                       const BinaryField& phi, const Grid& grid) {
    check_same_grid(sigma, phi);
    std::int64_t ink = 0, touching = 0;
    for (CellIndex i = 0; i < grid.cell_count(); ++i) {
        if (!sigma[i]) continue;
        ++ink;
        bool near = false;
        grid.for_each_n1(i, [&](CellIndex j) {
            if (!near && phi[j]) near = true;
        });
        touching += near;
    }
    return ink == 0 ? 0.0 : static_cast<double>(touching) / static_cast<double>(ink);
}

/// Fraction of pore cells holding ink (the fill level reached by an
/// infinite-volume solution).
inline double free_space_fill_fraction(const BinaryField& sigma,
                                       const BinaryField& phi, const Grid& grid) {
    check_same_grid(sigma, phi);
    std::int64_t free_cells = 0, ink = 0;
    for (CellIndex i = 0; i < grid.cell_count(); ++i) {
        if (phi[i]) continue;
        ++free_cells;
        ink += sigma[i];
    }
    return free_cells == 0 ? 0.0
                           : static_cast<double>(ink) / static_cast<double>(free_cells);
}

} // namespace inkseep
