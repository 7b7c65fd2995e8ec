#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "fwn/inference.hpp"
#include "fwn/simulate.hpp"

namespace fwn {

/// Monte Carlo experiment: n_reps of (simulate -> test) per sample length,
/// evaluated at every requested level. Deterministic given the master seed,
/// whatever the worker count.
struct Experiment {
    DgpSpec dgp;  ///< template; seed and t_len are overridden per replication
    std::vector<Eigen::Index> t_values;
    std::vector<double> alphas;
    int n_reps = 500;
    TestMode mode = TestMode::classical;
    double delta = 0.0;
    bool with_ci = false;        ///< also track CI coverage of `ci_oracle`
    double ci_oracle = 0.0;
    double ci_alpha = 0.05;
    std::uint64_t master_seed = 0;
    int threads = 1;
    TestOptions options;
    bool collect_z = false;  ///< retain the per-replication z sample
};

struct CellResult {
    Eigen::Index t_len = 0;
    double alpha = 0.0;
    int n_reps = 0;
    int rejections = 0;
    double rate = 0.0;
    double se = 0.0;  ///< binomial standard error sqrt(rate(1-rate)/n)
    double z_mean = 0.0;
    double z_var = 0.0;
    double ks_normal = 0.0;  ///< KS distance of the z sample to N(0,1)
    std::optional<double> ci_coverage;
    double seconds = 0.0;
    std::vector<double> z_sample;  ///< filled when Experiment::collect_z
};

struct ExperimentResult {
    std::vector<CellResult> cells;
    std::uint64_t master_seed = 0;
    Eigen::Index grid_size = 0;
    int threads = 0;
    std::string rng_algorithm;
    double seconds = 0.0;
};

/// Error from a single replication, with its index attached.
class ReplicationError : public std::runtime_error {
public:
    ReplicationError(int replication, const std::string& what)
        : std::runtime_error("replication " + std::to_string(replication) + ": " + what),
          replication_(replication) {}
    int replication() const { return replication_; }

private:
    int replication_;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of replication r in cell c: master XOR-folded with both indices.
inline std::uint64_t replication_seed(std::uint64_t master, std::uint64_t cell,
                                      std::uint64_t rep) {
    return mix64(master ^ mix64(cell + 0x632be59bd9b4e019ULL) ^
                 mix64(rep + 0x9e3779b97f4a7c15ULL));
}

inline double ks_to_standard_normal(std::vector<double> z) {
    std::sort(z.begin(), z.end());
    const double n = static_cast<double>(z.size());
    double d = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double cdf = normal_cdf(z[i]);
        d = std::max(d, std::abs(cdf - static_cast<double>(i + 1) / n));
        d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
    }
    return d;
}

struct RepOutcome {
    double z = 0.0;
    double m2 = 0.0;
    double v_h0 = 0.0;
    double ci_lo = 0.0, ci_hi = 0.0;
    bool has_ci = false;
};

template <typename Fn>
void parallel_reps(int n_reps, int threads, Fn&& body) {
    threads = std::max(1, threads);
    if (threads == 1) {
        for (int r = 0; r < n_reps; ++r) body(r);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    const int chunk = (n_reps + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            const int lo = w * chunk;
            const int hi = std::min(n_reps, lo + chunk);
            try {
                for (int r = lo; r < hi; ++r) body(r);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace detail

/// Run the experiment. Replications are independent tasks writing to
/// index-keyed slots, so aggregation order (and the result) does not depend
/// on the thread count.
inline ExperimentResult run(const Experiment& e) {
    if (e.n_reps < 1) throw std::invalid_argument("mc::run: n_reps must be >= 1");
    for (double a : e.alphas) {
        if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("mc::run: alpha out of (0,1)");
    }
    const auto t_start = std::chrono::steady_clock::now();
    ExperimentResult result;
    result.master_seed = e.master_seed;
    result.grid_size = e.dgp.grid_size;
    result.threads = e.threads;
    result.rng_algorithm = kRngAlgorithm;

    for (std::size_t ti = 0; ti < e.t_values.size(); ++ti) {
        const Eigen::Index t_len = e.t_values[ti];
        const auto c_start = std::chrono::steady_clock::now();
        std::vector<detail::RepOutcome> outcomes(static_cast<std::size_t>(e.n_reps));

        detail::parallel_reps(e.n_reps, e.threads, [&](int r) {
            DgpSpec spec = e.dgp;
            spec.t_len = t_len;
            spec.seed = detail::replication_seed(e.master_seed, ti, static_cast<std::uint64_t>(r));
            try {
                const FunctionalSample sample = simulate(spec);
                detail::RepOutcome& out = outcomes[static_cast<std::size_t>(r)];
                if (e.mode == TestMode::classical) {
                    // alpha only moves the threshold; test once at a nominal level
                    const TestReport rep = classical_test(sample, 0.5, e.options);
                    out.z = rep.z;
                    out.m2 = rep.m_hat_sq;
                    out.v_h0 = rep.v_h0;
                } else {
                    const TestReport rep = precise_test(sample, e.delta, 0.5, e.mode, e.options);
                    out.z = rep.z;
                    out.m2 = rep.m_hat_sq;
                    out.v_h0 = rep.v_h0;
                    if (rep.ci) {
                        out.has_ci = true;
                        out.ci_lo = rep.ci->first;
                        out.ci_hi = rep.ci->second;
                    }
                }
                if (e.with_ci && !out.has_ci) {
                    const auto ci = confidence_interval(sample, e.ci_alpha);
                    out.has_ci = true;
                    out.ci_lo = ci.first;
                    out.ci_hi = ci.second;
                }
            } catch (const std::exception& ex) {
                throw ReplicationError(r, ex.what());
            }
        });

        const double cell_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - c_start).count();

        std::vector<double> zs(outcomes.size());
        for (std::size_t i = 0; i < outcomes.size(); ++i) zs[i] = outcomes[i].z;
        double z_mean = 0.0, z_var = 0.0;
        for (double z : zs) z_mean += z;
        z_mean /= static_cast<double>(zs.size());
        for (double z : zs) z_var += (z - z_mean) * (z - z_mean);
        z_var /= static_cast<double>(zs.size());
        const double ks = detail::ks_to_standard_normal(zs);

        std::optional<double> coverage;
        if (e.with_ci) {
            int covered = 0;
            for (const auto& o : outcomes) {
                covered += (o.has_ci && o.ci_lo <= e.ci_oracle && e.ci_oracle <= o.ci_hi) ? 1 : 0;
            }
            coverage = static_cast<double>(covered) / static_cast<double>(e.n_reps);
        }

        for (double alpha : e.alphas) {
            CellResult cell;
            cell.t_len = t_len;
            cell.alpha = alpha;
            cell.n_reps = e.n_reps;
            int rej = 0;
            if (e.mode == TestMode::similarity) {
                const double u = normal_quantile(alpha);
                for (double z : zs) rej += (z < u) ? 1 : 0;
            } else {
                const double u = normal_quantile(1.0 - alpha);
                for (double z : zs) rej += (z > u) ? 1 : 0;
            }
            cell.rejections = rej;
            cell.rate = static_cast<double>(rej) / static_cast<double>(e.n_reps);
            cell.se = std::sqrt(cell.rate * (1.0 - cell.rate) / static_cast<double>(e.n_reps));
            cell.z_mean = z_mean;
            cell.z_var = z_var;
            cell.ks_normal = ks;
            cell.ci_coverage = coverage;
            cell.seconds = cell_seconds;
            if (e.collect_z) cell.z_sample = zs;
            result.cells.push_back(std::move(cell));
        }
    }
    result.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

struct NullDiagnostic {
    double ks_normal;      ///< KS distance of z to N(0,1)
    double variance_ratio; ///< Var(sqrt(T) M^2) / mean((4*pi*Int S2)^2)
    double z_mean;
    double z_var;
};

/// Distributional diagnostic under an H0 process: standard-normality of z and
/// the empirical probe of the null-variance constant (the ratio sits near 1/2
/// when Var(sqrt(T) M^2) matches the CLT value 8*pi^2 (Int|f_0|^2)^2).
inline NullDiagnostic null_distribution_diagnostic(const Experiment& e) {
    if (e.mode != TestMode::classical) {
        throw std::invalid_argument("null_distribution_diagnostic: classical mode required");
    }
    if (e.t_values.size() != 1) {
        throw std::invalid_argument("null_distribution_diagnostic: give exactly one T");
    }
    Experiment probe = e;
    probe.collect_z = true;
    probe.alphas = {0.05};
    const Eigen::Index t_len = e.t_values[0];

    std::vector<detail::RepOutcome> outcomes(static_cast<std::size_t>(e.n_reps));
    detail::parallel_reps(e.n_reps, e.threads, [&](int r) {
        DgpSpec spec = e.dgp;
        spec.t_len = t_len;
        spec.seed = detail::replication_seed(e.master_seed, 0, static_cast<std::uint64_t>(r));
        try {
            const FunctionalSample sample = simulate(spec);
            const TestReport rep = classical_test(sample, 0.05, e.options);
            outcomes[static_cast<std::size_t>(r)] = {rep.z, rep.m_hat_sq, rep.v_h0,
                                                     0.0,   0.0,          false};
        } catch (const std::exception& ex) {
            throw ReplicationError(r, ex.what());
        }
    });

    std::vector<double> zs(outcomes.size());
    double m_mean = 0.0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        zs[i] = outcomes[i].z;
        m_mean += outcomes[i].m2;
    }
    m_mean /= static_cast<double>(outcomes.size());
    double m_var = 0.0, v_sq_mean = 0.0, z_mean = 0.0;
    for (const auto& o : outcomes) {
        m_var += (o.m2 - m_mean) * (o.m2 - m_mean);
        v_sq_mean += o.v_h0 * o.v_h0;
        z_mean += o.z;
    }
    m_var /= static_cast<double>(outcomes.size());
    v_sq_mean /= static_cast<double>(outcomes.size());
    z_mean /= static_cast<double>(outcomes.size());
    double z_var = 0.0;
    for (double z : zs) z_var += (z - z_mean) * (z - z_mean);
    z_var /= static_cast<double>(zs.size());

    NullDiagnostic d;
    d.ks_normal = detail::ks_to_standard_normal(zs);
    d.variance_ratio = static_cast<double>(t_len) * m_var / v_sq_mean;
    d.z_mean = z_mean;
    d.z_var = z_var;
    return d;
}

}  // namespace fwn
