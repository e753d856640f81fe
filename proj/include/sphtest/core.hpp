#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphtest {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// A point or location would leave the sphere.
struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The sample carries no information in the tested direction (e.g. all rows at ±θ₀).
struct DegenerateSampleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Unit vector in R^p.
class Direction {
public:
    static constexpr double kTolerance = 1e-12;

    explicit Direction(std::vector<double> coords);

    static Direction normalized(std::vector<double> v);
    static Direction basis(std::size_t p, std::size_t i = 0);

    std::size_t dim() const { return x_.size(); }
    std::span<const double> coords() const { return x_; }
    double operator[](std::size_t i) const { return x_[i]; }
    double dot(const Direction& o) const;

private:
    std::vector<double> x_;
};

// n×p row-major matrix whose rows lie on S^{p−1}.
class SphericalSample {
public:
    static constexpr double kTolerance = 1e-10;

    SphericalSample(std::size_t n, std::size_t p, std::vector<double> rows,
                    double tol = kTolerance);

    std::size_t n() const { return n_; }
    std::size_t p() const { return p_; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * p_, p_}; }
    std::span<const double> data() const { return data_; }

private:
    std::size_t n_, p_;
    std::vector<double> data_;
};

void require_same_dim(std::size_t a, std::size_t b, const char* what);

}  // namespace sphtest
