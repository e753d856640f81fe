#include <atomic>
#include <cstdlib>
#include <cstring>

#include "sphtest/core.hpp"
#include "sphtest/kernels.hpp"

namespace sphtest::kernels {

#ifndef SPHTEST_WITH_AVX2
const Table* avx2_table() { return nullptr; }
#endif

namespace {

const Table* choose() {
    const char* env = std::getenv("SPHTEST_KERNELS");
    if (env && std::strcmp(env, "scalar") == 0) return &scalar_table();
    if (const Table* t = avx2_table()) return t;
    return &scalar_table();
}

std::atomic<const Table*>& slot() {
    static std::atomic<const Table*> s{choose()};
    return s;
}

double sum_rec(const Table& t, const double* x, std::size_t n) {
    if (n <= kLeaf) return t.sum_leaf(x, n);
    const std::size_t h = (n / 2) & ~std::size_t{3};
    return sum_rec(t, x, h) + sum_rec(t, x + h, n - h);
}

double dot_rec(const Table& t, const double* x, const double* y, std::size_t n) {
    if (n <= kLeaf) return t.dot_leaf(x, y, n);
    const std::size_t h = (n / 2) & ~std::size_t{3};
    return dot_rec(t, x, y, h) + dot_rec(t, x + h, y + h, n - h);
}

}  // namespace

const Table& active() { return *slot().load(std::memory_order_relaxed); }
void set_active(const Table& t) { slot().store(&t, std::memory_order_relaxed); }

double sum(const Table& t, std::span<const double> x) { return sum_rec(t, x.data(), x.size()); }

double dot(const Table& t, std::span<const double> x, std::span<const double> y) {
    require_same_dim(x.size(), y.size(), "dot");
    return dot_rec(t, x.data(), y.data(), x.size());
}

double sum(std::span<const double> x) { return sum(active(), x); }
double dot(std::span<const double> x, std::span<const double> y) { return dot(active(), x, y); }

void axpy(double a, std::span<const double> x, std::span<double> y) {
    require_same_dim(x.size(), y.size(), "axpy");
    active().axpy(a, x.data(), y.data(), x.size());
}

void scale(double a, std::span<double> x) { active().scale(a, x.data(), x.size()); }

void normals(philox::Key key, std::uint64_t first, std::span<double> out) {
    active().normals(key, first, out.data(), out.size());
}

}  // namespace sphtest::kernels
