#include "dnls/field.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "dnls/error.hpp"
#include "fft.hpp"

namespace dnls {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid_argument";
        case ErrorKind::GridMismatch: return "grid_mismatch";
        case ErrorKind::NonFinite: return "non_finite";
        case ErrorKind::Overflow: return "overflow";
        case ErrorKind::NoConvergence: return "no_convergence";
        case ErrorKind::NoEigenvalue: return "no_eigenvalue";
        case ErrorKind::OutsideValidity: return "outside_validity";
        case ErrorKind::Degenerate: return "degenerate";
        case ErrorKind::Solvability: return "solvability";
        case ErrorKind::FitResidual: return "fit_residual";
        case ErrorKind::ZeroCoefficient: return "zero_coefficient";
        case ErrorKind::IllConditioned: return "ill_conditioned";
        case ErrorKind::Contraction: return "contraction";
        case ErrorKind::ResidualCheck: return "residual_check";
        case ErrorKind::BoundaryDrift: return "boundary_drift";
        case ErrorKind::RoundTrip: return "round_trip";
        case ErrorKind::ConservationDrift: return "conservation_drift";
        case ErrorKind::Io: return "io";
        case ErrorKind::Config: return "config";
    }
    return "unknown";
}

namespace {

void check_finite(std::span<const cplx> v, const char* what) {
    for (const auto& c : v) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            fail(ErrorKind::NonFinite, std::string(what) + ": non-finite sample");
        }
    }
}

void check_length(const Grid& g, std::size_t n, const char* what) {
    if (n != g.size()) {
        std::ostringstream os;
        os << what << ": " << n << " samples for a grid of " << g.size() << " points";
        fail(ErrorKind::InvalidArgument, os.str());
    }
}

}  // namespace

Grid::Grid(double length, std::size_t points) : length_(length), points_(points) {
    if (!(length > 0.0) || !std::isfinite(length)) fail(ErrorKind::InvalidArgument, "grid length must be positive");
    if (points < 8 || (points & (points - 1)) != 0) {
        fail(ErrorKind::InvalidArgument, "grid point count must be a power of two >= 8");
    }
}

double Grid::wavenumber(std::size_t j) const noexcept {
    const auto n = static_cast<long long>(points_);
    long long m = static_cast<long long>(j);
    if (m >= n / 2) m -= n;
    return 2.0 * std::numbers::pi * static_cast<double>(m) / length_;
}

double Grid::max_wavenumber() const noexcept { return std::numbers::pi / spacing(); }

std::vector<double> Grid::coordinates() const {
    std::vector<double> xs(points_);
    for (std::size_t k = 0; k < points_; ++k) xs[k] = x(k);
    return xs;
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
    if (!(a == b)) fail(ErrorKind::GridMismatch, std::string(where) + ": fields live on different grids");
}

GridField::GridField(Grid grid, std::vector<cplx> values) : grid_(grid), values_(std::move(values)) {
    check_length(grid_, values_.size(), "GridField");
    check_finite(values_, "GridField");
}

GridField GridField::zeros(const Grid& grid) { return GridField(grid, std::vector<cplx>(grid.size())); }

namespace {

template <class Op>
std::vector<cplx> zip(std::span<const cplx> a, std::span<const cplx> b, Op op) {
    std::vector<cplx> out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = op(a[k], b[k]);
    return out;
}

std::vector<cplx> scaled(cplx s, std::span<const cplx> a) {
    std::vector<cplx> out(a.begin(), a.end());
    for (auto& v : out) v *= s;
    return out;
}

}  // namespace

GridField operator+(const GridField& a, const GridField& b) {
    require_same_grid(a.grid(), b.grid(), "operator+");
    return GridField(a.grid(), zip(a.values(), b.values(), std::plus<>{}));
}

GridField operator-(const GridField& a, const GridField& b) {
    require_same_grid(a.grid(), b.grid(), "operator-");
    return GridField(a.grid(), zip(a.values(), b.values(), std::minus<>{}));
}

GridField operator*(cplx s, const GridField& a) { return GridField(a.grid(), scaled(s, a.values())); }

VectorField::VectorField(Grid grid, std::vector<cplx> c1, std::vector<cplx> c2)
    : grid_(grid), c1_(std::move(c1)), c2_(std::move(c2)) {
    check_length(grid_, c1_.size(), "VectorField");
    check_length(grid_, c2_.size(), "VectorField");
    check_finite(c1_, "VectorField");
    check_finite(c2_, "VectorField");
}

GridField VectorField::component(int which) const {
    if (which != 1 && which != 2) fail(ErrorKind::InvalidArgument, "VectorField::component: index must be 1 or 2");
    const auto& src = which == 1 ? c1_ : c2_;
    return GridField(grid_, src);
}

VectorField operator+(const VectorField& a, const VectorField& b) {
    require_same_grid(a.grid(), b.grid(), "operator+");
    return VectorField(a.grid(), zip(a.comp1(), b.comp1(), std::plus<>{}), zip(a.comp2(), b.comp2(), std::plus<>{}));
}

VectorField operator-(const VectorField& a, const VectorField& b) {
    require_same_grid(a.grid(), b.grid(), "operator-");
    return VectorField(a.grid(), zip(a.comp1(), b.comp1(), std::minus<>{}), zip(a.comp2(), b.comp2(), std::minus<>{}));
}

VectorField operator*(cplx s, const VectorField& a) {
    return VectorField(a.grid(), scaled(s, a.comp1()), scaled(s, a.comp2()));
}

MatrixField::MatrixField(Grid grid, std::vector<cplx> m11, std::vector<cplx> m12, std::vector<cplx> m21,
                         std::vector<cplx> m22)
    : grid_(grid), m11_(std::move(m11)), m12_(std::move(m12)), m21_(std::move(m21)), m22_(std::move(m22)) {
    for (const auto* v : {&m11_, &m12_, &m21_, &m22_}) {
        check_length(grid_, v->size(), "MatrixField");
        check_finite(*v, "MatrixField");
    }
}

MatrixField MatrixField::identity(const Grid& grid) {
    const std::size_t n = grid.size();
    return MatrixField(grid, std::vector<cplx>(n, 1.0), std::vector<cplx>(n), std::vector<cplx>(n),
                       std::vector<cplx>(n, 1.0));
}

VectorField MatrixField::column(int j) const {
    if (j == 1) return VectorField(grid_, m11_, m21_);
    return VectorField(grid_, m12_, m22_);
}

MatrixField MatrixField::from_columns(const VectorField& c1, const VectorField& c2) {
    require_same_grid(c1.grid(), c2.grid(), "MatrixField::from_columns");
    auto v = [](std::span<const cplx> s) { return std::vector<cplx>(s.begin(), s.end()); };
    return MatrixField(c1.grid(), v(c1.comp1()), v(c2.comp1()), v(c1.comp2()), v(c2.comp2()));
}

double l2_norm(const GridField& f) {
    double s = 0.0;
    for (const auto& v : f.values()) s += std::norm(v);
    return std::sqrt(f.grid().spacing() * s);
}

double l2_norm(const VectorField& f) {
    double s = 0.0;
    for (const auto& v : f.comp1()) s += std::norm(v);
    for (const auto& v : f.comp2()) s += std::norm(v);
    return std::sqrt(f.grid().spacing() * s);
}

double max_abs(const GridField& f) {
    double m = 0.0;
    for (const auto& v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

cplx inner(const GridField& f, const GridField& g) {
    require_same_grid(f.grid(), g.grid(), "inner");
    cplx s = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) s += f[k] * std::conj(g[k]);
    return f.grid().spacing() * s;
}

cplx inner(const VectorField& f, const VectorField& g) {
    require_same_grid(f.grid(), g.grid(), "inner");
    cplx s = 0.0;
    auto f1 = f.comp1(), f2 = f.comp2(), g1 = g.comp1(), g2 = g.comp2();
    for (std::size_t k = 0; k < f.size(); ++k) s += f1[k] * std::conj(g1[k]) + f2[k] * std::conj(g2[k]);
    return f.grid().spacing() * s;
}

GridField spectral_derivative(const GridField& f, int order) {
    if (order != 1 && order != 2) fail(ErrorKind::InvalidArgument, "spectral_derivative: order must be 1 or 2");
    const Grid& g = f.grid();
    const std::size_t n = g.size();
    auto spec = detail::fft(f.values());
    for (std::size_t j = 0; j < n; ++j) {
        const double k = g.wavenumber(j);
        if (order == 1) {
            spec[j] *= (j == n / 2) ? cplx(0.0) : cplx(0.0, k);
        } else {
            spec[j] *= -k * k;
        }
    }
    return GridField(g, detail::ifft(spec));
}

std::vector<cplx> shifted_samples(const GridField& f, double a) {
    const Grid& g = f.grid();
    const std::size_t n = g.size();
    auto spec = detail::fft(f.values());
    for (std::size_t j = 0; j < n; ++j) {
        const double ka = g.wavenumber(j) * a;
        spec[j] *= cplx(std::cos(ka), std::sin(ka));
    }
    return detail::ifft(spec);
}

GridField translate_phase(const GridField& f, double a, double b) {
    auto v = a == 0.0 ? std::vector<cplx>(f.values().begin(), f.values().end()) : shifted_samples(f, a);
    const cplx rot(std::cos(b), std::sin(b));
    for (auto& c : v) c *= rot;
    return GridField(f.grid(), std::move(v));
}

}  // namespace dnls
