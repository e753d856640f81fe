#include "sphtest/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <numbers>
#include <thread>

#include "sphtest/fvml.hpp"
#include "sphtest/power.hpp"
#include "sphtest/specfun.hpp"
#include "sphtest/stats.hpp"

namespace sphtest::mc {

namespace {

// Everything a replication needs, fixed per (regime, ell).
struct Cell {
    Regime regime;
    int ell;
    regimes::RegimeSpec spec;
    regimes::LocalAlternative alt;
    fvml::MomentSet moments;
    double thr_watson, thr_z, thr_hybrid;
};

Cell prepare(const SimConfig& c, Regime r, int ell) {
    const auto spec = regimes::make_spec(r, c.n, c.p, c.severe);
    const Direction theta0 = Direction::basis(c.p);
    auto alt = regimes::local_alternative(theta0, spec.nu, ell, c.L);
    return Cell{r,
                ell,
                spec,
                std::move(alt),
                fvml::moments(c.p, spec.kappa),
                specfun::chi2_quantile(c.p - 1, 1.0 - c.alpha),
                specfun::std_normal_quantile(c.alpha),
                specfun::std_normal_quantile(1.0 - c.alpha)};
}

// One replication; bit k of the result is the decision of c.tests[k].
unsigned replicate(const SimConfig& c, const Cell& cell, int m) {
    const std::uint64_t key = replication_key(c.seed, cell.regime, cell.ell, m);
    CounterRng rng(philox::Key{std::uint32_t(key), std::uint32_t(key >> 32)});
    const auto sample = fvml::sample_fvml({cell.alt.theta, cell.spec.kappa}, c.n, rng);
    const auto s = stats::summarize(sample, Direction::basis(c.p));
    unsigned bits = 0;
    for (std::size_t k = 0; k < c.tests.size(); ++k) {
        bool reject = false;
        switch (c.tests[k]) {
            case TestKind::watson: reject = stats::watson_statistic(s) > cell.thr_watson; break;
            case TestKind::z: reject = stats::z_stat(s, cell.moments.e1, cell.moments.e2_tilde) < cell.thr_z; break;
            case TestKind::hybrid:
                reject = stats::hybrid_statistic(s, cell.spec.kappa, cell.moments) > cell.thr_hybrid;
                break;
        }
        if (reject) bits |= 1u << k;
    }
    return bits;
}

int thread_count(const SimConfig& c) {
    if (c.threads > 0) return c.threads;
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<CellResult> tally(const SimConfig& c, const Cell& cell, std::span<const unsigned> bits) {
    std::vector<CellResult> out;
    const double t = 2.0 * cell.ell / c.L;
    for (std::size_t k = 0; k < c.tests.size(); ++k) {
        int rej = 0;
        for (unsigned b : bits) rej += (b >> k) & 1u;
        out.push_back({c.n, c.p, cell.regime, cell.ell, t, c.tests[k], cell.spec.kappa, cell.spec.nu, rej, c.M,
                       double(rej) / c.M,
                       power::study_asymptotic_power(c.tests[k], cell.regime, t, c.alpha, c.n, c.p,
                                                     cell.spec.kappa, c.severe),
                       c.seed});
    }
    std::sort(out.begin(), out.end(),
              [](const CellResult& a, const CellResult& b) { return a.test < b.test; });
    return out;
}

}  // namespace

void parallel_for(std::size_t total, int threads, const std::function<void(std::size_t)>& fn) {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr failure;
    auto work = [&] {
        for (std::size_t j; !failed.load() && (j = next.fetch_add(1)) < total;) {
            try {
                fn(j);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    const std::size_t nt = std::min<std::size_t>(std::max(threads, 1), total);
    {
        std::vector<std::jthread> pool;
        for (std::size_t i = 1; i < nt; ++i) pool.emplace_back(work);
        work();
    }
    if (failure) std::rethrow_exception(failure);
}

void validate(const SimConfig& c) {
    if (c.n < 1) throw ConfigError("n must be >= 1");
    if (c.p < 2) throw ConfigError("p must be >= 2");
    if (c.M < 1) throw ConfigError("M must be >= 1");
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ConfigError("alpha must be in (0,1)");
    if (c.L < 1) throw ConfigError("L must be >= 1");
    if (c.regimes.empty()) throw ConfigError("at least one regime is required");
    if (c.tests.empty()) throw ConfigError("at least one test is required");
    if (c.tests.size() > 3) throw ConfigError("at most three tests");
    if (c.threads < 0) throw ConfigError("threads must be >= 0");
    auto dup = [](auto v) {
        std::sort(v.begin(), v.end());
        return std::adjacent_find(v.begin(), v.end()) != v.end();
    };
    if (dup(c.regimes)) throw ConfigError("duplicate regime");
    if (dup(c.tests)) throw ConfigError("duplicate test");
}

std::uint64_t replication_key(std::uint64_t seed, Regime r, int ell, int m) {
    return hash64({seed, std::uint64_t(regimes::index_of(r)), std::uint64_t(ell), std::uint64_t(m)});
}

std::vector<CellResult> run_cell(const SimConfig& c, Regime r, int ell) {
    SimConfig one = c;
    one.regimes = {r};
    validate(one);
    if (ell < 0 || ell > c.L) throw ConfigError("ell must be in 0..L");
    const Cell cell = prepare(c, r, ell);
    std::vector<unsigned> bits(c.M);
    parallel_for(std::size_t(c.M), thread_count(c), [&](std::size_t m) { bits[m] = replicate(c, cell, int(m)); });
    return tally(c, cell, bits);
}

std::vector<CellResult> run_study(const SimConfig& c) {
    validate(c);
    std::vector<Regime> regs = c.regimes;
    std::sort(regs.begin(), regs.end());

    std::vector<Cell> cells;
    for (Regime r : regs)
        for (int ell = 0; ell <= c.L; ++ell) cells.push_back(prepare(c, r, ell));

    // Flat job list; each slot is written by exactly one worker.
    const std::size_t total = cells.size() * std::size_t(c.M);
    std::vector<unsigned> bits(total);
    parallel_for(total, thread_count(c), [&](std::size_t j) { bits[j] = replicate(c, cells[j / c.M], int(j % c.M)); });

    std::vector<CellResult> rows;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        auto part = tally(c, cells[i], std::span<const unsigned>(bits).subspan(i * c.M, c.M));
        rows.insert(rows.end(), part.begin(), part.end());
    }
    return rows;
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& os, std::span<const CellResult> rows) {
    os << kCsvHeader << '\n';
    for (const auto& r : rows) {
        os << r.n << ',' << r.p << ',' << regimes::to_string(r.regime) << ',' << r.ell << ',' << format_real(r.t)
           << ',' << to_string(r.test) << ',' << format_real(r.kappa) << ',' << format_real(r.nu) << ','
           << r.rejections << ',' << r.M << ',' << format_real(r.freq) << ','
           << (r.asym_power ? format_real(*r.asym_power) : std::string("none")) << ',' << r.seed << '\n';
    }
    if (!os) throw std::runtime_error("failed writing CSV");
}

}  // namespace sphtest::mc
