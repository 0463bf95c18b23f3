#include "mlefit/harness.hpp"

#include "mlefit/distributions.hpp"
#include "mlefit/errors.hpp"
#include "mlefit/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

namespace mlefit {

namespace {

struct Outcome {
    bool ok = false;
    double error1 = 0.0;
    double error2 = 0.0;
};

const std::vector<double> kTableSizes = {25, 50, 100, 500, 25000};

ExperimentConfig make_preset(Distribution dist, std::vector<std::pair<double, double>> blocks,
                             std::uint64_t seed, std::size_t replicates) {
    ExperimentConfig config;
    config.distribution = dist;
    config.replicates = replicates;
    config.master_seed = seed;
    for (const auto& [p1, p2] : blocks) {
        for (double n : kTableSizes) {
            config.cells.push_back({p1, p2, static_cast<std::size_t>(n)});
        }
    }
    return config;
}

FitResult fit_one(const ExperimentConfig& config, Method method, const LogSample& sample) {
    if (config.distribution == Distribution::ML) {
        if (method == Method::LogMoment) {
            return estimate_ml_logmoment(log_summary(sample, config.variance_divisor));
        }
        return estimate_ml_fractional(sample);
    }
    if (method == Method::LogMoment) {
        return estimate_gml_logmoment(log_summary(sample, config.variance_divisor), config.psi_mode);
    }
    return estimate_gml_fractional(sample);
}

void run_replicate(const ExperimentConfig& config, std::size_t cell_index, std::size_t replicate,
                   std::vector<double>& buffer, Outcome* out) {
    const Cell& cell = config.cells[cell_index];
    RngStream rng(config.master_seed, cell_index, replicate);
    buffer.resize(cell.n);
    if (config.distribution == Distribution::ML) {
        sample_ml(rng, MLParams(cell.param1, cell.param2), buffer);
    } else {
        sample_gml(rng, GMLParams(cell.param1, cell.param2), buffer);
    }
    const LogSample sample(buffer);
    for (std::size_t e = 0; e < config.estimators.size(); ++e) {
        try {
            const FitResult fit = fit_one(config, config.estimators[e], sample);
            if (fit.converged && std::isfinite(fit.raw_param1) && std::isfinite(fit.param2)) {
                out[e] = {true, fit.raw_param1 - cell.param1, fit.param2 - cell.param2};
            }
        } catch (const DomainError&) {
        } catch (const ConvergenceError&) {
        }
    }
}

struct Moments {
    double bias;
    double se;
    double rmse;
};

Moments summarize(const std::vector<double>& errors) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    if (errors.empty()) {
        return {nan, nan, nan};
    }
    const auto count = static_cast<double>(errors.size());
    double sum = 0.0;
    for (double e : errors) {
        sum += e;
    }
    const double bias = sum / count;
    double ss = 0.0;
    for (double e : errors) {
        ss += (e - bias) * (e - bias);
    }
    // bias^2 + population variance keeps rmse >= |bias| under rounding
    const double rmse = std::sqrt(bias * bias + ss / count);
    const double se = errors.size() > 1 ? std::sqrt(ss / (count - 1.0) / count) : nan;
    return {bias, se, rmse};
}

} // namespace

void ExperimentConfig::validate() const {
    if (cells.empty()) {
        throw DomainError("experiment needs at least one cell");
    }
    if (replicates < 1) {
        throw DomainError("replicates must be at least 1");
    }
    if (estimators.empty()) {
        throw DomainError("experiment needs at least one estimator");
    }
    for (const Cell& cell : cells) {
        if (cell.n < 2) {
            throw DomainError("every cell needs n >= 2");
        }
        if (distribution == Distribution::ML) {
            MLParams(cell.param1, cell.param2);
        } else {
            GMLParams(cell.param1, cell.param2);
        }
    }
}

CellReport run_cell(const ExperimentConfig& config, std::size_t cell_index, unsigned threads) {
    config.validate();
    if (cell_index >= config.cells.size()) {
        throw DomainError("cell index " + std::to_string(cell_index) + " out of range");
    }
    const std::size_t replicates = config.replicates;
    const std::size_t num_estimators = config.estimators.size();
    std::vector<Outcome> outcomes(replicates * num_estimators);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        std::vector<double> buffer;
        for (;;) {
            const std::size_t r = next.fetch_add(1, std::memory_order_relaxed);
            if (r >= replicates) {
                return;
            }
            run_replicate(config, cell_index, r, buffer, &outcomes[r * num_estimators]);
        }
    };
    const unsigned workers =
        static_cast<unsigned>(std::clamp<std::size_t>(threads, 1, replicates));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i) {
            pool.emplace_back(worker);
        }
    }

    CellReport report{config.cells[cell_index], {}};
    std::vector<double> errors1;
    std::vector<double> errors2;
    for (std::size_t e = 0; e < num_estimators; ++e) {
        errors1.clear();
        errors2.clear();
        std::size_t failures = 0;
        for (std::size_t r = 0; r < replicates; ++r) {
            const Outcome& o = outcomes[r * num_estimators + e];
            if (o.ok) {
                errors1.push_back(o.error1);
                errors2.push_back(o.error2);
            } else {
                ++failures;
            }
        }
        const Moments m1 = summarize(errors1);
        const Moments m2 = summarize(errors2);
        report.estimators.push_back(
            {config.estimators[e], m1.bias, m1.se, m1.rmse, m2.bias, m2.se, m2.rmse, failures});
    }
    return report;
}

std::vector<CellReport> run_experiment(const ExperimentConfig& config, unsigned threads) {
    config.validate();
    std::vector<CellReport> reports;
    reports.reserve(config.cells.size());
    for (std::size_t i = 0; i < config.cells.size(); ++i) {
        reports.push_back(run_cell(config, i, threads));
    }
    return reports;
}

ExperimentConfig table1_preset(std::uint64_t seed, std::size_t replicates) {
    return make_preset(Distribution::ML, {{0.5, 0.5}, {0.6, 5.0}, {0.7, 1.0}, {0.8, 100.0}, {0.9, 0.1}},
                       seed, replicates);
}

ExperimentConfig table2_preset(std::uint64_t seed, std::size_t replicates) {
    return make_preset(Distribution::GML, {{0.5, 20.0}, {0.6, 15.0}, {0.7, 10.0}, {0.8, 5.0}, {0.9, 1.0}},
                       seed, replicates);
}

} // namespace mlefit
