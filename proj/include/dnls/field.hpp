#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace dnls {

using cplx = std::complex<double>;

/// Uniform periodic grid on [-L/2, L/2) with N points (N a power of two, N >= 8).
class Grid {
public:
    Grid(double length, std::size_t points);

    double length() const noexcept { return length_; }
    std::size_t size() const noexcept { return points_; }
    double spacing() const noexcept { return length_ / static_cast<double>(points_); }
    double x(std::size_t k) const noexcept {
        return -0.5 * length_ + static_cast<double>(k) * spacing();
    }
    /// Angular wavenumber of FFT bin j in the signed convention (Nyquist bin negative).
    double wavenumber(std::size_t j) const noexcept;
    double max_wavenumber() const noexcept;
    std::vector<double> coordinates() const;

    friend bool operator==(const Grid& a, const Grid& b) noexcept {
        return a.length_ == b.length_ && a.points_ == b.points_;
    }

private:
    double length_;
    std::size_t points_;
};

/// Complex samples of a function on a Grid. Values are fixed at construction
/// and checked finite.
class GridField {
public:
    GridField(Grid grid, std::vector<cplx> values);
    static GridField zeros(const Grid& grid);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const cplx> values() const noexcept { return values_; }
    const cplx& operator[](std::size_t k) const noexcept { return values_[k]; }

private:
    Grid grid_;
    std::vector<cplx> values_;
};

GridField operator+(const GridField& a, const GridField& b);
GridField operator-(const GridField& a, const GridField& b);
GridField operator*(cplx s, const GridField& a);

/// Two-component field (Lax eigenvector, Jost column).
class VectorField {
public:
    VectorField(Grid grid, std::vector<cplx> c1, std::vector<cplx> c2);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return c1_.size(); }
    std::span<const cplx> comp1() const noexcept { return c1_; }
    std::span<const cplx> comp2() const noexcept { return c2_; }
    GridField component(int which) const;

private:
    Grid grid_;
    std::vector<cplx> c1_, c2_;
};

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(cplx s, const VectorField& a);

/// 2x2 matrix field stored entrywise.
class MatrixField {
public:
    MatrixField(Grid grid, std::vector<cplx> m11, std::vector<cplx> m12,
                std::vector<cplx> m21, std::vector<cplx> m22);
    static MatrixField identity(const Grid& grid);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return m11_.size(); }
    std::span<const cplx> m11() const noexcept { return m11_; }
    std::span<const cplx> m12() const noexcept { return m12_; }
    std::span<const cplx> m21() const noexcept { return m21_; }
    std::span<const cplx> m22() const noexcept { return m22_; }
    /// Column j (1 or 2) as a VectorField.
    VectorField column(int j) const;
    static MatrixField from_columns(const VectorField& c1, const VectorField& c2);

private:
    Grid grid_;
    std::vector<cplx> m11_, m12_, m21_, m22_;
};

double l2_norm(const GridField& f);
double l2_norm(const VectorField& f);
double max_abs(const GridField& f);

/// <f, g> = h * sum f_k conj(g_k).
cplx inner(const GridField& f, const GridField& g);
/// Componentwise sum of the scalar inner products.
cplx inner(const VectorField& f, const VectorField& g);

/// Fourier differentiation, order 1 or 2. The Nyquist mode is dropped for odd orders.
GridField spectral_derivative(const GridField& f, int order = 1);

/// e^{ib} f(x + a), the translation done exactly through Fourier phases.
GridField translate_phase(const GridField& f, double a, double b);

/// Values of f at x_k + a for every grid point (spectral interpolation), as a raw array.
std::vector<cplx> shifted_samples(const GridField& f, double a);

void require_same_grid(const Grid& a, const Grid& b, const char* where);

}  // namespace dnls
