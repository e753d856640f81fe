#include "sphtest/core.hpp"

#include <cmath>

#include "sphtest/kernels.hpp"

namespace sphtest {

namespace {

double norm2(std::span<const double> x) { return kernels::dot(x, x); }

}  // namespace

Direction::Direction(std::vector<double> coords) : x_(std::move(coords)) {
    if (x_.empty()) throw DimensionError("direction must have at least one coordinate");
    for (double v : x_)
        if (!std::isfinite(v)) throw DomainError("direction has non-finite coordinate");
    const double nn = norm2(x_);
    if (std::abs(std::sqrt(nn) - 1.0) > kTolerance)
        throw DomainError("direction is not unit norm (|x| = " + std::to_string(std::sqrt(nn)) + ")");
}

Direction Direction::normalized(std::vector<double> v) {
    const double nn = norm2(v);
    if (!(nn > 0.0) || !std::isfinite(nn)) throw DomainError("cannot normalize a zero or non-finite vector");
    kernels::scale(1.0 / std::sqrt(nn), v);
    return Direction(std::move(v));
}

Direction Direction::basis(std::size_t p, std::size_t i) {
    if (i >= p) throw DimensionError("basis index out of range");
    std::vector<double> v(p, 0.0);
    v[i] = 1.0;
    return Direction(std::move(v));
}

double Direction::dot(const Direction& o) const {
    require_same_dim(dim(), o.dim(), "direction dot");
    return kernels::dot(x_, o.x_);
}

SphericalSample::SphericalSample(std::size_t n, std::size_t p, std::vector<double> rows, double tol)
    : n_(n), p_(p), data_(std::move(rows)) {
    if (n_ < 1) throw DimensionError("sample needs at least one row");
    if (p_ < 2) throw DimensionError("sample dimension must be at least 2");
    if (data_.size() != n_ * p_) throw DimensionError("sample storage does not match n×p");
    for (std::size_t i = 0; i < n_; ++i) {
        const double r = std::sqrt(norm2(row(i)));
        if (!(std::abs(r - 1.0) <= tol))
            throw DomainError("sample row " + std::to_string(i) + " is not unit norm");
    }
}

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b)
        throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                             " vs " + std::to_string(b) + ")");
}

}  // namespace sphtest
