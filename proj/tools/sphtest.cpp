// Command-line front end: simulate, test, power, moments, sample, diagnose.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sphtest/fvml.hpp"
#include "sphtest/mc.hpp"
#include "sphtest/power.hpp"
#include "sphtest/regimes.hpp"
#include "sphtest/specfun.hpp"
#include "sphtest/stats.hpp"

using namespace sphtest;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Flag values that parse but make no sense.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<std::vector<double>> read_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::vector<double>> rows;
    for (std::string line; std::getline(in, line);) {
        for (char& ch : line)
            if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
        std::istringstream ls(line);
        std::vector<double> row;
        for (std::string tok; ls >> tok;) {
            std::size_t used = 0;
            double v;
            try {
                v = std::stod(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size()) throw std::runtime_error(path + ": not a number: '" + tok + "'");
            row.push_back(v);
        }
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error(path + ": no data");
    return rows;
}

Direction read_direction(const std::string& path) {
    const auto rows = read_matrix(path);
    std::vector<double> v;
    for (const auto& r : rows) v.insert(v.end(), r.begin(), r.end());
    double nn = 0.0;
    for (double x : v) nn += x * x;
    if (std::abs(std::sqrt(nn) - 1.0) > 1e-6) throw std::runtime_error(path + ": theta0 is not unit norm");
    return Direction::normalized(std::move(v));
}

SphericalSample read_sample(const std::string& path) {
    const auto rows = read_matrix(path);
    const std::size_t p = rows.front().size();
    std::vector<double> data;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != p)
            throw std::runtime_error(path + ": row " + std::to_string(i + 1) + " has " +
                                     std::to_string(rows[i].size()) + " columns, expected " + std::to_string(p));
        double nn = 0.0;
        for (double x : rows[i]) nn += x * x;
        const double r = std::sqrt(nn);
        if (std::abs(r - 1.0) > 1e-6) throw std::runtime_error(path + ": row " + std::to_string(i + 1) + " is not unit norm");
        for (double x : rows[i]) data.push_back(x / r);
    }
    return SphericalSample(rows.size(), p, std::move(data));
}

std::string fmt(double v) { return mc::format_real(v); }

regimes::Regime regime_flag(const std::string& s) {
    const auto r = regimes::parse_regime(s);
    if (!r) throw UsageError("unknown regime '" + s + "' (expected i, ii, iii, iv, va, vb, vc, vi, vii)");
    return *r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spike-direction tests for high-dimensional FvML samples"};
    app.require_subcommand(1);

    // simulate
    mc::SimConfig sim;
    std::string sim_regimes, sim_tests, sim_out;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo rejection frequencies over regimes x ell x tests");
    simulate->add_option("--n", sim.n, "sample size")->required()->check(CLI::PositiveNumber);
    simulate->add_option("--p", sim.p, "dimension")->required()->check(CLI::Range(2, 1 << 20));
    simulate->add_option("--m", sim.M, "replications per cell")->capture_default_str();
    simulate->add_option("--alpha", sim.alpha, "nominal level")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "base seed")->capture_default_str();
    simulate->add_option("--regimes", sim_regimes, "comma list of regimes (default: i,ii,iii,iv,va,vb,vi,vii)");
    simulate->add_option("--tests", sim_tests, "comma list from watson,z,hybrid (default: all)");
    simulate->add_flag("--severe", sim.severe, "severe alternatives for va/vb/vc");
    simulate->add_option("--L", sim.L, "grid size, ell = 0..L")->capture_default_str();
    simulate->add_option("--threads", sim.threads, "worker threads, 0 = all cores")->capture_default_str();
    simulate->add_option("--out", sim_out, "output CSV path ('-' for stdout)")->required();

    // test
    std::string data_path, theta0_path, test_name;
    double test_alpha = 0.05;
    std::optional<double> test_kappa;
    auto* test = app.add_subcommand("test", "Run one test on a sample file");
    test->add_option("--data", data_path, "CSV, one unit vector per row")->required();
    test->add_option("--theta0", theta0_path, "file holding theta0 (default e1)");
    test->add_option("--test", test_name, "watson, z or hybrid")->required();
    test->add_option("--alpha", test_alpha, "nominal level")->capture_default_str();
    test->add_option("--kappa", test_kappa, "concentration (z and hybrid)");

    // power
    std::string power_regime;
    double power_t = 0.0, power_alpha = 0.05;
    std::optional<double> power_xi;
    bool power_severe = false;
    auto* powercmd = app.add_subcommand("power", "Limiting powers at local alternative size t");
    powercmd->add_option("--regime", power_regime, "i, ii, iii, iv, va, vb, vc, vi, vii")->required();
    powercmd->add_option("--t", power_t, "alternative size, 0 <= t <= 2")->required();
    powercmd->add_option("--alpha", power_alpha, "nominal level")->capture_default_str();
    powercmd->add_option("--xi", power_xi, "regime constant xi (iv, vi, vb severe)");
    powercmd->add_flag("--severe", power_severe, "severe alternatives for va/vb");

    // moments
    int mom_p = 0;
    double mom_kappa = 0.0;
    auto* momcmd = app.add_subcommand("moments", "FvML moments of U = X'theta");
    momcmd->add_option("--p", mom_p, "dimension")->required();
    momcmd->add_option("--kappa", mom_kappa, "concentration")->required();

    // sample
    int smp_p = 0, smp_n = 0;
    double smp_kappa = 0.0;
    std::uint64_t smp_seed = 1;
    std::string smp_out, smp_theta;
    auto* smpcmd = app.add_subcommand("sample", "Draw an FvML sample as CSV");
    smpcmd->add_option("--p", smp_p, "dimension")->required();
    smpcmd->add_option("--kappa", smp_kappa, "concentration")->required();
    smpcmd->add_option("--n", smp_n, "sample size")->required();
    smpcmd->add_option("--seed", smp_seed, "seed")->capture_default_str();
    smpcmd->add_option("--theta", smp_theta, "file holding the location (default e1)");
    smpcmd->add_option("--out", smp_out, "output CSV path ('-' for stdout)")->required();

    // diagnose
    double dg_n = 0.0, dg_p = 0.0, dg_kappa = 0.0;
    auto* dgcmd = app.add_subcommand("diagnose", "Regime ratios of a finite (n, p, kappa)");
    dgcmd->add_option("--n", dg_n, "sample size")->required();
    dgcmd->add_option("--p", dg_p, "dimension")->required();
    dgcmd->add_option("--kappa", dg_kappa, "concentration")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*simulate) {
            if (!sim_regimes.empty()) {
                sim.regimes.clear();
                for (const auto& s : split_list(sim_regimes)) sim.regimes.push_back(regime_flag(s));
            }
            if (!sim_tests.empty()) {
                sim.tests.clear();
                for (const auto& s : split_list(sim_tests)) {
                    const auto t = parse_test(s);
                    if (!t) throw UsageError("unknown test '" + s + "'");
                    sim.tests.push_back(*t);
                }
            }
            try {
                mc::validate(sim);
            } catch (const ConfigError& e) {
                throw UsageError(e.what());
            }
            const auto rows = mc::run_study(sim);
            if (sim_out == "-") {
                mc::write_csv(std::cout, rows);
            } else {
                std::ofstream os(sim_out, std::ios::binary);
                if (!os) throw std::runtime_error("cannot open " + sim_out);
                mc::write_csv(os, rows);
            }
        } else if (*test) {
            const auto kind = parse_test(test_name);
            if (!kind) throw UsageError("unknown test '" + test_name + "'");
            if (!(test_alpha > 0.0 && test_alpha < 1.0)) throw UsageError("--alpha must be in (0,1)");
            if (*kind != TestKind::watson && !(test_kappa && *test_kappa > 0.0))
                throw UsageError("--kappa > 0 is required for the z and hybrid tests");
            const auto sample = read_sample(data_path);
            const Direction theta0 = theta0_path.empty() ? Direction::basis(sample.p()) : read_direction(theta0_path);
            require_same_dim(sample.p(), theta0.dim(), "theta0");
            const auto s = stats::summarize(sample, theta0);
            stats::TestResult r;
            switch (*kind) {
                case TestKind::watson: r = stats::watson(s, test_alpha); break;
                case TestKind::z: {
                    const auto m = fvml::moments(int(sample.p()), *test_kappa);
                    r = stats::z_test(s, m.e1, m.e2_tilde, test_alpha);
                    break;
                }
                case TestKind::hybrid: {
                    const auto m = fvml::moments(int(sample.p()), *test_kappa);
                    r = stats::hybrid(s, *test_kappa, m, test_alpha);
                    break;
                }
            }
            std::cout << "test=" << to_string(*kind) << "\nn=" << s.n << "\np=" << s.p
                      << "\nstatistic=" << fmt(r.statistic) << "\nthreshold=" << fmt(r.threshold)
                      << "\nreject_when=" << (r.tail == stats::Tail::upper ? "statistic > threshold" : "statistic < threshold")
                      << "\ndecision=" << (r.reject ? "reject" : "do not reject") << "\np_value=" << fmt(r.p_value)
                      << '\n';
        } else if (*powercmd) {
            const auto r = regime_flag(power_regime);
            if (!(power_t >= 0.0 && power_t <= 2.0)) throw UsageError("--t must be in [0,2]");
            if (!(power_alpha > 0.0 && power_alpha < 1.0)) throw UsageError("--alpha must be in (0,1)");
            if (power_xi && !(*power_xi > 0.0)) throw UsageError("--xi must be > 0");
            if (r == regimes::Regime::Vb && power_severe && !power_xi)
                throw UsageError("--xi is required for regime vb with --severe");
            const bool needs_xi = r == regimes::Regime::IV || r == regimes::Regime::VI;
            std::cout << "regime=" << regimes::to_string(r) << "\nt=" << fmt(power_t) << "\nalpha=" << fmt(power_alpha)
                      << "\nwatson=" << fmt(power::watson_power(r, power_t, power_alpha, power_xi, power_severe))
                      << "\noptimal_specified=";
            if (needs_xi && !power_xi)
                std::cout << "unavailable (needs --xi)";
            else if (const auto v = power::optimal_power_specified(r, power_t, power_alpha, power_xi))
                std::cout << fmt(*v);
            else
                std::cout << "none (no consistent test)";
            std::cout << "\noptimal_unspecified=";
            if (r == regimes::Regime::IV && !power_xi)
                std::cout << fmt(power::optimal_power(0.5, power_t, power_alpha));
            else if (const auto v = power::optimal_power_unspecified(r, power_t, power_alpha, power_xi, power_severe))
                std::cout << fmt(*v);
            else
                std::cout << "none (no consistent test)";
            std::cout << '\n';
        } else if (*momcmd) {
            if (mom_p < 2) throw UsageError("--p must be >= 2");
            if (!(mom_kappa > 0.0) || !std::isfinite(mom_kappa)) throw UsageError("--kappa must be > 0");
            const auto m = fvml::moments(mom_p, mom_kappa);
            std::cout << "p=" << mom_p << "\nkappa=" << fmt(mom_kappa) << "\ne1=" << fmt(m.e1) << "\ne2=" << fmt(m.e2)
                      << "\ne2_tilde=" << fmt(m.e2_tilde) << "\nf2=" << fmt(m.f2)
                      << "\nf4_over_f2_sq=" << fmt(m.f4_over_f2_sq) << '\n';
        } else if (*smpcmd) {
            if (smp_p < 2) throw UsageError("--p must be >= 2");
            if (smp_n < 1) throw UsageError("--n must be >= 1");
            if (!(smp_kappa > 0.0) || !std::isfinite(smp_kappa)) throw UsageError("--kappa must be > 0");
            const Direction theta = smp_theta.empty() ? Direction::basis(smp_p) : read_direction(smp_theta);
            require_same_dim(theta.dim(), std::size_t(smp_p), "theta");
            CounterRng rng = CounterRng::from_seed(smp_seed);
            const auto x = fvml::sample_fvml({theta, smp_kappa}, std::size_t(smp_n), rng);
            std::ofstream file;
            if (smp_out != "-") {
                file.open(smp_out, std::ios::binary);
                if (!file) throw std::runtime_error("cannot open " + smp_out);
            }
            std::ostream& os = smp_out == "-" ? std::cout : file;
            for (std::size_t i = 0; i < x.n(); ++i) {
                const auto row = x.row(i);
                for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << fmt(row[j]);
                os << '\n';
            }
            if (!os) throw std::runtime_error("failed writing sample");
        } else if (*dgcmd) {
            if (!(dg_n >= 1.0) || !(dg_p >= 2.0) || !(dg_kappa > 0.0))
                throw UsageError("need --n >= 1, --p >= 2, --kappa > 0");
            const auto d = regimes::diagnose(dg_n, dg_p, dg_kappa);
            std::cout << "kappa/p=" << fmt(d.kappa_over_p) << "\nsqrt(n)kappa/p=" << fmt(d.sqrtn_kappa_over_p)
                      << "\nsqrt(n)kappa/p^(3/4)=" << fmt(d.sqrtn_kappa_over_p34)
                      << "\nsqrt(n)kappa/sqrt(p)=" << fmt(d.sqrtn_kappa_over_sqrtp)
                      << "\nnearest=" << regimes::to_string(d.nearest) << "\nnote=advisory; regimes are asymptotic\n";
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
