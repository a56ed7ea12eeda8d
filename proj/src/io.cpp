#include "dnls/io.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "dnls/error.hpp"

namespace dnls {

namespace {

void write_header(std::ostream& os, const Grid& g, double t) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "# L=%.17g N=%zu t=%.17g\n", g.length(), g.size(), t);
    os << buf;
}

void write_rows(std::ostream& os, const Grid& g, std::initializer_list<std::span<const cplx>> cols) {
    char buf[64];
    for (std::size_t k = 0; k < g.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", g.x(k));
        os << buf;
        for (const auto& c : cols) {
            std::snprintf(buf, sizeof buf, " %.17g %.17g", c[k].real(), c[k].imag());
            os << buf;
        }
        os << '\n';
    }
    if (!os) fail(ErrorKind::Io, "write failed");
}

struct Header {
    double length = 0.0;
    std::size_t points = 0;
    double t = 0.0;
};

Header read_header(std::istream& is) {
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty()) break;
    }
    Header h;
    if (std::sscanf(line.c_str(), "# L=%lf N=%zu t=%lf", &h.length, &h.points, &h.t) != 3) {
        fail(ErrorKind::Io, "malformed field header: '" + line + "'");
    }
    return h;
}

template <std::size_t C>
std::array<std::vector<cplx>, C> read_rows(std::istream& is, const Grid& g) {
    std::array<std::vector<cplx>, C> out;
    for (auto& v : out) v.resize(g.size());
    std::string line;
    std::size_t k = 0;
    while (k < g.size() && std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        double x = 0.0;
        ls >> x;
        for (std::size_t c = 0; c < C; ++c) {
            double re = 0.0, im = 0.0;
            ls >> re >> im;
            out[c][k] = {re, im};
        }
        if (!ls) fail(ErrorKind::Io, "malformed field row " + std::to_string(k));
        ++k;
    }
    if (k != g.size()) fail(ErrorKind::Io, "field file has " + std::to_string(k) + " rows, header says " +
                                               std::to_string(g.size()));
    return out;
}

template <class Fn>
auto with_input(const std::string& path, Fn fn) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open " + path);
    return fn(in);
}

template <class F>
void save_impl(const std::string& path, const F& f, double t) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::Io, "cannot open " + path + " for writing");
    write_field(out, f, t);
}

}  // namespace

void write_field(std::ostream& os, const GridField& f, double t) {
    write_header(os, f.grid(), t);
    write_rows(os, f.grid(), {f.values()});
}

void write_field(std::ostream& os, const VectorField& f, double t) {
    write_header(os, f.grid(), t);
    write_rows(os, f.grid(), {f.comp1(), f.comp2()});
}

void write_field(std::ostream& os, const MatrixField& f, double t) {
    write_header(os, f.grid(), t);
    write_rows(os, f.grid(), {f.m11(), f.m12(), f.m21(), f.m22()});
}

Stamped<GridField> read_grid_field(std::istream& is) {
    const auto h = read_header(is);
    Grid g(h.length, h.points);
    auto cols = read_rows<1>(is, g);
    return {GridField(g, std::move(cols[0])), h.t};
}

Stamped<VectorField> read_vector_field(std::istream& is) {
    const auto h = read_header(is);
    Grid g(h.length, h.points);
    auto cols = read_rows<2>(is, g);
    return {VectorField(g, std::move(cols[0]), std::move(cols[1])), h.t};
}

Stamped<MatrixField> read_matrix_field(std::istream& is) {
    const auto h = read_header(is);
    Grid g(h.length, h.points);
    auto cols = read_rows<4>(is, g);
    return {MatrixField(g, std::move(cols[0]), std::move(cols[1]), std::move(cols[2]), std::move(cols[3])), h.t};
}

void save(const std::string& path, const GridField& f, double t) { save_impl(path, f, t); }
void save(const std::string& path, const VectorField& f, double t) { save_impl(path, f, t); }
void save(const std::string& path, const MatrixField& f, double t) { save_impl(path, f, t); }

Stamped<GridField> load_grid_field(const std::string& path) {
    return with_input(path, [](std::istream& in) { return read_grid_field(in); });
}
Stamped<VectorField> load_vector_field(const std::string& path) {
    return with_input(path, [](std::istream& in) { return read_vector_field(in); });
}
Stamped<MatrixField> load_matrix_field(const std::string& path) {
    return with_input(path, [](std::istream& in) { return read_matrix_field(in); });
}

}  // namespace dnls
