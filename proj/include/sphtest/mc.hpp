#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sphtest/regimes.hpp"
#include "sphtest/test_kind.hpp"

namespace sphtest::mc {

using regimes::Regime;

struct SimConfig {
    int n = 400, p = 400;
    int M = 1000;
    double alpha = 0.05;
    int L = 5;
    std::vector<Regime> regimes{regimes::kStudyRegimes.begin(), regimes::kStudyRegimes.end()};
    std::vector<TestKind> tests{TestKind::watson, TestKind::z, TestKind::hybrid};
    bool severe = false;
    std::uint64_t seed = 1;
    int threads = 0;  // 0: hardware concurrency
};

// Throws ConfigError.
void validate(const SimConfig& c);

struct CellResult {
    int n, p;
    Regime regime;
    int ell;
    double t;
    TestKind test;
    double kappa, nu;
    int rejections, M;
    double freq;
    std::optional<double> asym_power;  // nullopt: no detecting test (written as `none`)
    std::uint64_t seed;
};

// Stream key of replication m in cell (regime, ell).
std::uint64_t replication_key(std::uint64_t seed, Regime r, int ell, int m);

std::vector<CellResult> run_cell(const SimConfig& c, Regime r, int ell);
// Rows sorted by (regime, ell, test) in enum order.
std::vector<CellResult> run_study(const SimConfig& c);

// Runs fn(0..total−1) on `threads` workers; rethrows the first failure.
void parallel_for(std::size_t total, int threads, const std::function<void(std::size_t)>& fn);

inline constexpr const char* kCsvHeader = "n,p,regime,ell,t,test,kappa,nu,rejections,M,freq,asym_power,seed";

std::string format_real(double v);  // 17 significant digits
void write_csv(std::ostream& os, std::span<const CellResult> rows);

}  // namespace sphtest::mc
