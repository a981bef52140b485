#pragma once

// Plot-ready dumps of a finest-grid solution.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sgweno/error.hpp"
#include "sgweno/mesh.hpp"

namespace sgweno {

enum class DumpFormat {
    field,  ///< every node: coordinates and value
    cut,    ///< 1D line x = y (z at the middle node in 3D)
    slice,  ///< 2D plane at the middle z node (3D only)
};

inline DumpFormat parse_dump_format(const std::string& s) {
    if (s == "field") return DumpFormat::field;
    if (s == "cut") return DumpFormat::cut;
    if (s == "slice") return DumpFormat::slice;
    throw Error("unknown dump format '" + s + "' (expected field, cut or slice)");
}

struct CutSample {
    double x = 0.0;
    double u = 0.0;
};

/// Values along the diagonal x = y of the x-y plane through the middle z node.
inline std::vector<CutSample> diagonal_cut(const GridFunction& u) {
    const GridSpec& s = u.spec;
    if (s.cells(0) != s.cells(1)) throw Error("diagonal cut needs equal node counts along x and y");
    const std::size_t kz = s.dim() == 3 ? s.cells(2) / 2 : 0;
    std::vector<CutSample> cut;
    cut.reserve(s.cells(0));
    for (std::size_t i = 0; i < s.cells(0); ++i) {
        const NodeIndex idx{i, i, kz};
        cut.push_back({node_coordinate(s, idx)[0], u.at(idx)});
    }
    return cut;
}

/// Sum of |u_{i+1} - u_i| around the periodic cut.
inline double total_variation(const std::vector<CutSample>& cut) {
    double tv = 0.0;
    for (std::size_t i = 0; i < cut.size(); ++i) tv += std::abs(cut[(i + 1) % cut.size()].u - cut[i].u);
    return tv;
}

namespace detail {

inline void write_value(std::ostream& os, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5e", v);
    os << buf;
}

inline std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open '" + path.string() + "' for writing");
    return os;
}

inline void finish(std::ofstream& os, const std::filesystem::path& path) {
    os.flush();
    if (!os) throw Error("write to '" + path.string() + "' failed");
}

}  // namespace detail

/// Writes one CSV per requested format into `dir` and returns their paths.
inline std::vector<std::filesystem::path> dump_solution(const GridFunction& u, const std::set<DumpFormat>& formats,
                                                        const std::filesystem::path& dir,
                                                        const std::string& stem = "solution") {
    std::vector<std::filesystem::path> written;
    if (formats.empty()) return written;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());

    const GridSpec& s = u.spec;
    const int dim = s.dim();
    static const char* axis_names[] = {"x", "y", "z"};

    if (formats.count(DumpFormat::field)) {
        const auto path = dir / (stem + "_field.csv");
        auto os = detail::open_for_write(path);
        for (int k = 0; k < dim; ++k) os << axis_names[k] << ',';
        os << "u\n";
        for (std::size_t n = 0; n < u.size(); ++n) {
            const Point x = node_coordinate(s, s.unflat(n));
            for (int k = 0; k < dim; ++k) {
                detail::write_value(os, x[k]);
                os << ',';
            }
            detail::write_value(os, u.values[n]);
            os << '\n';
        }
        detail::finish(os, path);
        written.push_back(path);
    }

    if (formats.count(DumpFormat::cut)) {
        const auto path = dir / (stem + "_cut.csv");
        auto os = detail::open_for_write(path);
        os << "x,u\n";
        for (const auto& c : diagonal_cut(u)) {
            detail::write_value(os, c.x);
            os << ',';
            detail::write_value(os, c.u);
            os << '\n';
        }
        detail::finish(os, path);
        written.push_back(path);
    }

    if (formats.count(DumpFormat::slice) && dim == 3) {
        const auto path = dir / (stem + "_slice.csv");
        auto os = detail::open_for_write(path);
        os << "x,y,u\n";
        const std::size_t kz = s.cells(2) / 2;
        for (std::size_t i = 0; i < s.cells(0); ++i)
            for (std::size_t j = 0; j < s.cells(1); ++j) {
                const NodeIndex idx{i, j, kz};
                const Point x = node_coordinate(s, idx);
                detail::write_value(os, x[0]);
                os << ',';
                detail::write_value(os, x[1]);
                os << ',';
                detail::write_value(os, u.at(idx));
                os << '\n';
            }
        detail::finish(os, path);
        written.push_back(path);
    }
    return written;
}

}  // namespace sgweno
