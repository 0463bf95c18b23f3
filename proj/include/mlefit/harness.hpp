#pragma once

#include "mlefit/estimators.hpp"
#include "mlefit/special_fn.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mlefit {

enum class Distribution { ML, GML };

/// One table cell: true (alpha, delta|beta) and the sample size.
struct Cell {
    double param1;
    double param2;
    std::size_t n;
};

inline constexpr std::size_t kDefaultReplicates = 10000;
inline constexpr std::size_t kQuickReplicates = 500;

struct ExperimentConfig {
    Distribution distribution = Distribution::ML;
    std::vector<Cell> cells;
    std::size_t replicates = kDefaultReplicates;
    std::uint64_t master_seed = 0;
    std::vector<Method> estimators = {Method::LogMoment, Method::FractionalMoment};
    PsiMode psi_mode = PsiMode::Accurate;
    /// n - 1 reproduces the reference bias tables; see README.
    VarianceDivisor variance_divisor = VarianceDivisor::NMinusOne;

    /// Throws DomainError on an empty or invalid configuration.
    void validate() const;
};

struct EstimatorReport {
    Method method;
    double bias_param1;
    double se_bias_param1;
    double rmse_param1;
    double bias_param2;
    double se_bias_param2;
    double rmse_param2;
    std::size_t failures;  // replicates excluded because the fit failed
};

struct CellReport {
    Cell cell;
    std::vector<EstimatorReport> estimators;  // same order as config.estimators
};

/// Runs every replicate of one cell. Replicate r draws from
/// RngStream(master_seed, cell_index, r); all selected estimators see the
/// same sample. Alpha errors use the unclamped estimate. Replicates whose fit
/// throws or reports converged = false are counted in failures and left out
/// of the averages. Results do not depend on `threads`.
CellReport run_cell(const ExperimentConfig& config, std::size_t cell_index, unsigned threads = 1);

std::vector<CellReport> run_experiment(const ExperimentConfig& config, unsigned threads = 1);

/// Table 1 grid: (alpha, delta) in (0.5,0.5), (0.6,5), (0.7,1), (0.8,100),
/// (0.9,0.1) crossed with n in 25, 50, 100, 500, 25000.
ExperimentConfig table1_preset(std::uint64_t seed, std::size_t replicates = kDefaultReplicates);

/// Table 2 grid: (alpha, beta) in (0.5,20), (0.6,15), (0.7,10), (0.8,5),
/// (0.9,1) crossed with the same sample sizes.
ExperimentConfig table2_preset(std::uint64_t seed, std::size_t replicates = kDefaultReplicates);

} // namespace mlefit
