#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "inkseep/analysis.hpp"
#include "inkseep/gasolver.hpp"
#include "inkseep/grid.hpp"

namespace inkseep {

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string format_double(double v, const char* fmt = "%.17g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

} // namespace detail

/// IVF1 field file: one text header line
///   IVF1 nx ny nz_paper nz_reservoir cell_size field_name
/// followed by nx*ny*nz raw bytes (0x00/0x01), x fastest, then y, then z.
inline void write_ivf1(const std::string& path, const BinaryField& field,
                       const std::string& name) {
    const Grid& g = field.grid();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open for writing: " + path);
    out << "IVF1 " << g.nx() << ' ' << g.ny() << ' ' << g.nz_paper() << ' '
        << g.nz_reservoir() << ' ' << detail::format_double(g.cell_size()) << ' '
        << name << '\n';
    out.write(reinterpret_cast<const char*>(field.raw().data()),
              static_cast<std::streamsize>(field.raw().size()));
    if (!out) throw io_error("write failed: " + path);
}

struct LoadedField {
    BinaryField field{Grid{1, 1, 1, 0, 1.0}};
    std::string name;
};

inline LoadedField read_ivf1(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open: " + path);
    std::string header;
    if (!std::getline(in, header)) throw io_error("missing IVF1 header: " + path);
    std::istringstream hs(header);
    std::string magic, name;
    int nx, ny, nz_paper, nz_reservoir;
    double cell_size;
    if (!(hs >> magic >> nx >> ny >> nz_paper >> nz_reservoir >> cell_size >> name) ||
        magic != "IVF1")
        throw io_error("malformed IVF1 header in " + path + ": " + header);
    LoadedField loaded;
    try {
        loaded.field = BinaryField(Grid(nx, ny, nz_paper, nz_reservoir, cell_size));
    } catch (const std::invalid_argument& e) {
        throw io_error("bad IVF1 dimensions in " + path + ": " + e.what());
    }
    loaded.name = name;
    in.read(reinterpret_cast<char*>(loaded.field.raw().data()),
            static_cast<std::streamsize>(loaded.field.raw().size()));
    if (in.gcount() != static_cast<std::streamsize>(loaded.field.raw().size()))
        throw io_error("truncated IVF1 payload: " + path);
    for (std::uint8_t b : loaded.field.raw())
        if (b > 1) throw io_error("IVF1 payload byte not 0x00/0x01: " + path);
    return loaded;
}

/// Legacy-VTK structured points (ASCII), one scalar per cell center, for
/// external viewers.
inline void write_vtk(const std::string& path, const BinaryField& field,
                      const std::string& name) {
    const Grid& g = field.grid();
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing: " + path);
    out << "# vtk DataFile Version 3.0\n"
        << name << "\n"
        << "ASCII\n"
        << "DATASET STRUCTURED_POINTS\n"
        << "DIMENSIONS " << g.nx() << ' ' << g.ny() << ' ' << g.nz() << "\n"
        << "ORIGIN " << detail::format_double(0.5 * g.cell_size(), "%.9g") << ' '
        << detail::format_double(0.5 * g.cell_size(), "%.9g") << ' '
        << detail::format_double(g.z_of_layer(0), "%.9g") << "\n"
        << "SPACING " << detail::format_double(g.cell_size(), "%.9g") << ' '
        << detail::format_double(g.cell_size(), "%.9g") << ' '
        << detail::format_double(g.cell_size(), "%.9g") << "\n"
        << "POINT_DATA " << g.cell_count() << "\n"
        << "SCALARS " << name << " int 1\n"
        << "LOOKUP_TABLE default\n";
    int col = 0;
    for (CellIndex i = 0; i < g.cell_count(); ++i) {
        out << int(field[i]);
        if (++col == 30) {
            out << '\n';
            col = 0;
        } else {
            out << ' ';
        }
    }
    if (col != 0) out << '\n';
    if (!out) throw io_error("write failed: " + path);
}

inline void write_trace_csv(const std::string& path, const EnergyTrace& trace) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing: " + path);
    out << "outer,inner,E_t,E_g,E_c,E_a,E_V,V_fluid,seconds\n";
    for (const TraceRow& r : trace) {
        out << r.outer << ',' << r.inner << ',' << detail::format_double(r.E_t, "%.12g")
            << ',' << detail::format_double(r.E_g, "%.12g") << ','
            << detail::format_double(r.E_c, "%.12g") << ','
            << detail::format_double(r.E_a, "%.12g") << ','
            << detail::format_double(r.E_V, "%.12g") << ',' << r.v_fluid << ','
            << detail::format_double(r.seconds, "%.6f") << '\n';
    }
    if (!out) throw io_error("write failed: " + path);
}

inline void write_saturation_csv(const std::string& path,
                                 const SaturationProfile& profile) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing: " + path);
    out << "z,free_cells,ink_cells,saturation\n";
    for (const SaturationRow& r : profile.rows)
        out << detail::format_double(r.z, "%.12g") << ',' << r.free_cells << ','
            << r.ink_cells << ',' << detail::format_double(r.saturation, "%.12g")
            << '\n';
    if (!out) throw io_error("write failed: " + path);
}

} // namespace inkseep
