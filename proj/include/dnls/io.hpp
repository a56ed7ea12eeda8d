#pragma once

#include <iosfwd>
#include <string>

#include "dnls/field.hpp"

namespace dnls {

/// A field read from disk together with the time stamp in its header.
template <class F>
struct Stamped {
    F field;
    double t = 0.0;
};

// Columnar text format. Header line `# L=<L> N=<N> t=<t>`, then one line per
// grid point: `x re im` for a scalar field, `x re1 im1 re2 im2` for a vector
// field and `x` followed by re/im pairs of m11 m12 m21 m22 for a matrix field.
// Values are written with 17 significant digits so a write/read cycle is exact.

void write_field(std::ostream& os, const GridField& f, double t = 0.0);
void write_field(std::ostream& os, const VectorField& f, double t = 0.0);
void write_field(std::ostream& os, const MatrixField& f, double t = 0.0);

Stamped<GridField> read_grid_field(std::istream& is);
Stamped<VectorField> read_vector_field(std::istream& is);
Stamped<MatrixField> read_matrix_field(std::istream& is);

void save(const std::string& path, const GridField& f, double t = 0.0);
void save(const std::string& path, const VectorField& f, double t = 0.0);
void save(const std::string& path, const MatrixField& f, double t = 0.0);
Stamped<GridField> load_grid_field(const std::string& path);
Stamped<VectorField> load_vector_field(const std::string& path);
Stamped<MatrixField> load_matrix_field(const std::string& path);

}  // namespace dnls
