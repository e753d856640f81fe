#include "sphtest/kernels.hpp"

#include <cmath>

namespace sphtest::kernels {

namespace {

double sum_leaf(const double* x, std::size_t n) {
    double l[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t n4 = n & ~std::size_t{3};
    for (std::size_t i = 0; i < n4; i += 4)
        for (int j = 0; j < 4; ++j) l[j] += x[i + j];
    double s = (l[0] + l[1]) + (l[2] + l[3]);
    for (std::size_t i = n4; i < n; ++i) s += x[i];
    return s;
}

double dot_leaf(const double* x, const double* y, std::size_t n) {
    double l[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t n4 = n & ~std::size_t{3};
    for (std::size_t i = 0; i < n4; i += 4)
        for (int j = 0; j < 4; ++j) l[j] = std::fma(x[i + j], y[i + j], l[j]);
    double s = (l[0] + l[1]) + (l[2] + l[3]);
    for (std::size_t i = n4; i < n; ++i) s = std::fma(x[i], y[i], s);
    return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void scale(double a, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] = a * x[i];
}

void normals(philox::Key key, std::uint64_t first, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 1 < n; i += 2) {
        const auto [a, b] = philox::box_muller(philox::generate(philox::counter(first++), key));
        out[i] = a;
        out[i + 1] = b;
    }
    if (i < n) out[i] = philox::box_muller(philox::generate(philox::counter(first), key)).first;
}

}  // namespace

const Table& scalar_table() {
    static const Table t{"scalar", sum_leaf, dot_leaf, axpy, scale, normals};
    return t;
}

}  // namespace sphtest::kernels
