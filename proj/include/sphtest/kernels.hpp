#pragma once

// Hot loops behind a runtime-selected table. The scalar table is the
// reference; every other table must match it bit for bit.

#include <cstddef>
#include <cstdint>
#include <span>

#include "sphtest/philox.hpp"

namespace sphtest::kernels {

struct Table {
    const char* name;
    // 4-lane accumulation (lane j takes i ≡ j mod 4), lanes folded as
    // (l0+l1)+(l2+l3), remainder added in order.
    double (*sum_leaf)(const double* x, std::size_t n);
    double (*dot_leaf)(const double* x, const double* y, std::size_t n);
    void (*axpy)(double a, const double* x, double* y, std::size_t n);  // y = fma(a, x, y)
    void (*scale)(double a, double* x, std::size_t n);
    // out[2i], out[2i+1] = Box–Muller pair of Philox block (first + i)
    void (*normals)(philox::Key key, std::uint64_t first, double* out, std::size_t n);
};

const Table& scalar_table();
// nullptr unless compiled in and supported by the running CPU.
const Table* avx2_table();

// Chosen once: AVX2 when available, unless SPHTEST_KERNELS=scalar.
const Table& active();
void set_active(const Table& t);

// Pairwise reductions: halves (rounded to a multiple of 4) down to leaves of kLeaf.
inline constexpr std::size_t kLeaf = 256;

double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double a, std::span<double> x);
void normals(philox::Key key, std::uint64_t first, std::span<double> out);

double sum(const Table& t, std::span<const double> x);
double dot(const Table& t, std::span<const double> x, std::span<const double> y);

}  // namespace sphtest::kernels
