#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace inkseep {

using CellIndex = std::int64_t;

struct Coord3 {
    int ix = 0;
    int iy = 0;
    int iz = 0;
    bool operator==(const Coord3&) const = default;
};

/// Discretized computational space: nz_reservoir layers below the sheet
/// surface (z < 0) and nz_paper layers above it (z >= 0), all cells cubes
/// of edge cell_size. Layer z-coordinates use the cell-center convention:
/// layer iz sits at z = (iz - nz_reservoir + 1/2) * cell_size, so layers
/// are strictly increasing in z and exactly nz_reservoir of them are
/// negative. Linear cell indices run x-fastest, then y, then z.
class Grid {
public:
    Grid(int nx, int ny, int nz_paper, int nz_reservoir, double cell_size)
        : nx_(nx), ny_(ny), nz_paper_(nz_paper), nz_reservoir_(nz_reservoir),
          cell_size_(cell_size) {
        if (nx < 1 || ny < 1 || nz_paper < 1)
            throw std::invalid_argument("Grid: nx, ny, nz_paper must be >= 1");
        if (nz_reservoir < 0)
            throw std::invalid_argument("Grid: nz_reservoir must be >= 0");
        if (!(cell_size > 0.0))
            throw std::invalid_argument("Grid: cell_size must be > 0");
    }

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int nz_paper() const { return nz_paper_; }
    int nz_reservoir() const { return nz_reservoir_; }
    int nz() const { return nz_paper_ + nz_reservoir_; }
    double cell_size() const { return cell_size_; }

    /// Total cell count V0.
    CellIndex cell_count() const {
        return static_cast<CellIndex>(nx_) * ny_ * nz();
    }

    double z_of_layer(int iz) const {
        return (iz - nz_reservoir_ + 0.5) * cell_size_;
    }
    double z_max() const { return z_of_layer(nz() - 1); }

    bool is_reservoir_layer(int iz) const { return iz < nz_reservoir_; }

    CellIndex index(int ix, int iy, int iz) const {
        return static_cast<CellIndex>(ix) +
               static_cast<CellIndex>(nx_) * (iy + static_cast<CellIndex>(ny_) * iz);
    }

    Coord3 coords(CellIndex i) const {
        Coord3 c;
        c.ix = static_cast<int>(i % nx_);
        c.iy = static_cast<int>((i / nx_) % ny_);
        c.iz = static_cast<int>(i / (static_cast<CellIndex>(nx_) * ny_));
        return c;
    }

    double z_of_cell(CellIndex i) const { return z_of_layer(coords(i).iz); }

    bool in_range(CellIndex i) const { return i >= 0 && i < cell_count(); }

    void check_index(CellIndex i) const {
        if (!in_range(i))
            throw std::invalid_argument("Grid: cell index " + std::to_string(i) +
                                        " out of range");
    }

    bool operator==(const Grid&) const = default;

    /// Visits neighbors at Chebyshev distance in [r_lo, r_hi], clipped at
    /// the grid boundary, in ascending linear-index order.
    template <typename Fn>
    void for_each_neighbor(CellIndex i, int r_lo, int r_hi, Fn&& fn) const {
        const Coord3 c = coords(i);
        const int z0 = c.iz - r_hi < 0 ? 0 : c.iz - r_hi;
        const int z1 = c.iz + r_hi >= nz() ? nz() - 1 : c.iz + r_hi;
        const int y0 = c.iy - r_hi < 0 ? 0 : c.iy - r_hi;
        const int y1 = c.iy + r_hi >= ny_ ? ny_ - 1 : c.iy + r_hi;
        const int x0 = c.ix - r_hi < 0 ? 0 : c.ix - r_hi;
        const int x1 = c.ix + r_hi >= nx_ ? nx_ - 1 : c.ix + r_hi;
        for (int iz = z0; iz <= z1; ++iz) {
            const int az = iz > c.iz ? iz - c.iz : c.iz - iz;
            for (int iy = y0; iy <= y1; ++iy) {
                const int ay = iy > c.iy ? iy - c.iy : c.iy - iy;
                const int ayz = ay > az ? ay : az;
                for (int ix = x0; ix <= x1; ++ix) {
                    const int ax = ix > c.ix ? ix - c.ix : c.ix - ix;
                    const int d = ax > ayz ? ax : ayz;
                    if (d >= r_lo && d <= r_hi) fn(index(ix, iy, iz));
                }
            }
        }
    }

    template <typename Fn>
    void for_each_n1(CellIndex i, Fn&& fn) const {
        for_each_neighbor(i, 1, 1, std::forward<Fn>(fn));
    }
    template <typename Fn>
    void for_each_n2(CellIndex i, Fn&& fn) const {
        for_each_neighbor(i, 2, 2, std::forward<Fn>(fn));
    }

private:
    int nx_;
    int ny_;
    int nz_paper_;
    int nz_reservoir_;
    double cell_size_;
};

inline Grid make_grid(int nx, int ny, int nz_paper, int nz_reservoir,
                      double cell_size) {
    return Grid(nx, ny, nz_paper, nz_reservoir, cell_size);
}

/// First-layer neighborhood: the 26 cells at Chebyshev distance 1,
/// clipped at boundaries, ascending index order.
inline std::vector<CellIndex> n1_neighbors(const Grid& grid, CellIndex i) {
    grid.check_index(i);
    std::vector<CellIndex> out;
    out.reserve(26);
    grid.for_each_n1(i, [&](CellIndex j) { out.push_back(j); });
    return out;
}

/// Second-layer neighborhood: the 98 cells at Chebyshev distance exactly 2
/// (the 5x5x5 shell minus the 3x3x3 core), clipped, ascending order.
inline std::vector<CellIndex> n2_neighbors(const Grid& grid, CellIndex i) {
    grid.check_index(i);
    std::vector<CellIndex> out;
    out.reserve(98);
    grid.for_each_n2(i, [&](CellIndex j) { out.push_back(j); });
    return out;
}

/// One 0/1 value per grid cell. Used for both the solid field (phi) and the
/// ink field (sigma); the +/-1 spin form is always derived as 2*v - 1,
/// never stored.
class BinaryField {
public:
    explicit BinaryField(const Grid& grid)
        : grid_(grid), values_(static_cast<std::size_t>(grid.cell_count()), 0) {}

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    std::uint8_t operator[](CellIndex i) const {
        return values_[static_cast<std::size_t>(i)];
    }
    void set(CellIndex i, bool v) {
        values_[static_cast<std::size_t>(i)] = v ? 1 : 0;
    }

    /// Spin value: +1 if set, -1 if clear.
    int spin(CellIndex i) const { return values_[static_cast<std::size_t>(i)] ? 1 : -1; }

    std::int64_t count_ones() const {
        std::int64_t n = 0;
        for (std::uint8_t v : values_) n += v;
        return n;
    }

    const std::vector<std::uint8_t>& raw() const { return values_; }
    std::vector<std::uint8_t>& raw() { return values_; }

    bool operator==(const BinaryField& other) const {
        return values_ == other.values_;
    }

private:
    Grid grid_;
    std::vector<std::uint8_t> values_;
};

inline void check_same_grid(const BinaryField& a, const BinaryField& b) {
    if (!(a.grid() == b.grid()))
        throw std::invalid_argument("fields defined on different grids");
}

} // namespace inkseep
