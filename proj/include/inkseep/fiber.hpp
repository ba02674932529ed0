#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "inkseep/grid.hpp"
#include "inkseep/random.hpp"

namespace inkseep {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

struct FiberParams {
    int fiber_count = 30;
    int blocks_per_fiber = 8;
    double block_length = 6.0;  // cell units
    double block_width = 2.0;
    double block_height = 1.0;
    double max_turn_deg = 30.0;  // in-plane stiffness
    double max_bend_deg = 15.0;  // out-of-plane deviation when piling
    double surface_width = 20.0;  // substrate extent in x
    double surface_depth = 20.0;  // substrate extent in y
    std::uint64_t seed = 1;

    void validate() const {
        if (fiber_count < 1 || blocks_per_fiber < 1)
            throw std::invalid_argument("FiberParams: counts must be >= 1");
        if (!(block_length > 0) || !(block_width > 0) || !(block_height > 0))
            throw std::invalid_argument("FiberParams: block dimensions must be > 0");
        if (max_turn_deg < 0 || max_turn_deg > 90 || max_bend_deg < 0 ||
            max_bend_deg > 90)
            throw std::invalid_argument("FiberParams: angles must be in [0, 90]");
        if (!(surface_width > 0) || !(surface_depth > 0))
            throw std::invalid_argument("FiberParams: surface extent must be > 0");
    }
};

/// One rectangular block of a fiber chain. Blocks stay axis-aligned in z
/// (stair-step bending): tilt_deg records the bottom-line rise from the
/// previous block, the box itself is flat. The guide line runs through the
/// center of the bottom face, from start_point() to end_point().
struct Block {
    Vec3 center;        // box center (z at mid-height)
    double angle_deg = 0.0;  // in-plane heading
    double tilt_deg = 0.0;   // z-tilt relative to the previous block (0 for the first)
    Vec3 dims;          // length, width, height

    double bottom_z() const { return center.z - dims.z * 0.5; }
    double top_z() const { return center.z + dims.z * 0.5; }

    Vec3 start_point() const {
        const double a = angle_deg * std::numbers::pi / 180.0;
        return {center.x - 0.5 * dims.x * std::cos(a),
                center.y - 0.5 * dims.x * std::sin(a), bottom_z()};
    }
    Vec3 end_point() const {
        const double a = angle_deg * std::numbers::pi / 180.0;
        return {center.x + 0.5 * dims.x * std::cos(a),
                center.y + 0.5 * dims.x * std::sin(a), bottom_z()};
    }

    bool contains(double x, double y, double z) const {
        if (z < bottom_z() || z > top_z()) return false;
        const double a = angle_deg * std::numbers::pi / 180.0;
        const double ca = std::cos(a), sa = std::sin(a);
        const Vec3 s = start_point();
        const double dx = x - s.x, dy = y - s.y;
        const double u = dx * ca + dy * sa;
        if (u < 0.0 || u > dims.x) return false;
        const double v = -dx * sa + dy * ca;
        return std::abs(v) <= dims.y * 0.5;
    }
};

struct Fiber {
    std::vector<Block> blocks;
};

struct FiberStructure {
    std::vector<Fiber> fibers;
    FiberParams params;
};

namespace detail {

struct FootprintRect {
    // corners of the block footprint in deposition order
    std::array<double, 4> xs{};
    std::array<double, 4> ys{};
};

inline FootprintRect footprint(double px, double py, double angle_deg,
                               double length, double width) {
    const double a = angle_deg * std::numbers::pi / 180.0;
    const double ux = std::cos(a), uy = std::sin(a);
    const double nxc = -uy * width * 0.5, nyc = ux * width * 0.5;
    FootprintRect r;
    r.xs = {px + nxc, px - nxc, px + ux * length - nxc, px + ux * length + nxc};
    r.ys = {py + nyc, py - nyc, py + uy * length - nyc, py + uy * length + nyc};
    return r;
}

/// Separating-axis overlap test for two convex quads. Touching edges do not
/// count as overlap, so chained blocks abutting end-to-end never stack on
/// each other.
inline bool rects_overlap(const FootprintRect& a, const FootprintRect& b) {
    const FootprintRect* rects[2] = {&a, &b};
    for (const FootprintRect* r : rects) {
        for (int e = 0; e < 4; ++e) {
            const double ex = r->xs[(e + 1) % 4] - r->xs[e];
            const double ey = r->ys[(e + 1) % 4] - r->ys[e];
            // axis normal to this edge
            const double ax = -ey, ay = ex;
            double amin = 1e300, amax = -1e300, bmin = 1e300, bmax = -1e300;
            for (int k = 0; k < 4; ++k) {
                const double pa = ax * a.xs[k] + ay * a.ys[k];
                const double pb = ax * b.xs[k] + ay * b.ys[k];
                amin = std::min(amin, pa);
                amax = std::max(amax, pa);
                bmin = std::min(bmin, pb);
                bmax = std::max(bmax, pb);
            }
            constexpr double eps = 1e-9;
            if (amax <= bmin + eps || bmax <= amin + eps) return false;
        }
    }
    return true;
}

} // namespace detail

/// Deposits fibers one by one: random start and heading on the substrate,
/// blocks chained with a bounded in-plane turn per block. Each block drops
/// to the highest supporting surface beneath its footprint (substrate at
/// z = 0 or blocks of previously placed fibers), with the per-block rise or
/// fall clamped to max_bend_deg. A fiber never rests on its own blocks.
/// Deterministic for a given seed (see kRandomSourceId).
inline FiberStructure generate(const FiberParams& params) {
    params.validate();
    RandomSource rng(params.seed);
    FiberStructure structure;
    structure.params = params;
    structure.fibers.reserve(static_cast<std::size_t>(params.fiber_count));

    struct Deposited {
        detail::FootprintRect rect;
        double top_z;
    };
    std::vector<Deposited> deposited;

    const double dz_max =
        params.block_length * std::tan(params.max_bend_deg * std::numbers::pi / 180.0);

    for (int f = 0; f < params.fiber_count; ++f) {
        Fiber fiber;
        fiber.blocks.reserve(static_cast<std::size_t>(params.blocks_per_fiber));

        double px = rng.uniform(0.0, params.surface_width);
        double py = rng.uniform(0.0, params.surface_depth);
        double heading = rng.uniform(0.0, 360.0);
        double prev_bottom = 0.0;

        for (int b = 0; b < params.blocks_per_fiber; ++b) {
            if (b > 0)
                heading += rng.uniform(-params.max_turn_deg, params.max_turn_deg);

            const detail::FootprintRect rect = detail::footprint(
                px, py, heading, params.block_length, params.block_width);

            double support = 0.0;
            for (const Deposited& d : deposited)
                if (d.top_z > support && detail::rects_overlap(rect, d.rect))
                    support = d.top_z;

            double bottom = support;
            double tilt_deg = 0.0;
            if (b > 0) {
                bottom = std::clamp(support, prev_bottom - dz_max, prev_bottom + dz_max);
                tilt_deg = std::atan2(bottom - prev_bottom, params.block_length) *
                           180.0 / std::numbers::pi;
            }

            const double a = heading * std::numbers::pi / 180.0;
            Block block;
            block.dims = {params.block_length, params.block_width, params.block_height};
            block.center = {px + 0.5 * params.block_length * std::cos(a),
                            py + 0.5 * params.block_length * std::sin(a),
                            bottom + 0.5 * params.block_height};
            block.angle_deg = heading;
            block.tilt_deg = tilt_deg;
            fiber.blocks.push_back(block);

            px = block.end_point().x;
            py = block.end_point().y;
            prev_bottom = bottom;
        }

        for (const Block& blk : fiber.blocks) {
            const Vec3 s = blk.start_point();
            deposited.push_back({detail::footprint(s.x, s.y, blk.angle_deg,
                                                   blk.dims.x, blk.dims.y),
                                 blk.top_z()});
        }
        structure.fibers.push_back(std::move(fiber));
    }
    return structure;
}

/// Marks phi = 1 wherever a cell center lies inside some block. Reservoir
/// layers stay 0; blocks overhanging the lateral bounds are clipped.
inline BinaryField voxelize(const FiberStructure& structure, const Grid& grid) {
    BinaryField phi(grid);
    const double h = grid.cell_size();
    for (const Fiber& fiber : structure.fibers) {
        for (const Block& block : fiber.blocks) {
            const double reach = 0.5 * std::hypot(block.dims.x, block.dims.y);
            const int x0 = std::max(0, static_cast<int>(std::floor((block.center.x - reach) / h)));
            const int x1 = std::min(grid.nx() - 1, static_cast<int>(std::ceil((block.center.x + reach) / h)));
            const int y0 = std::max(0, static_cast<int>(std::floor((block.center.y - reach) / h)));
            const int y1 = std::min(grid.ny() - 1, static_cast<int>(std::ceil((block.center.y + reach) / h)));
            for (int iz = grid.nz_reservoir(); iz < grid.nz(); ++iz) {
                const double z = grid.z_of_layer(iz);
                if (z < block.bottom_z() || z > block.top_z()) continue;
                for (int iy = y0; iy <= y1; ++iy) {
                    const double y = (iy + 0.5) * h;
                    for (int ix = x0; ix <= x1; ++ix) {
                        const double x = (ix + 0.5) * h;
                        if (block.contains(x, y, z)) phi.set(grid.index(ix, iy, iz), true);
                    }
                }
            }
        }
    }
    return phi;
}

/// Fraction of paper-layer cells that are pore space.
inline double porosity(const BinaryField& phi, const Grid& grid) {
    std::int64_t solid = 0;
    const CellIndex paper_begin =
        static_cast<CellIndex>(grid.nx()) * grid.ny() * grid.nz_reservoir();
    for (CellIndex i = paper_begin; i < grid.cell_count(); ++i) solid += phi[i];
    const double paper_cells =
        static_cast<double>(grid.cell_count() - paper_begin);
    return 1.0 - static_cast<double>(solid) / paper_cells;
}

} // namespace inkseep
