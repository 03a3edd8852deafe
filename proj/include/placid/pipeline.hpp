#pragma once

#include "placid/dcor.hpp"
#include "placid/gmm.hpp"
#include "placid/peeling.hpp"

#include <optional>

namespace placid {

struct PipelineOptions {
    std::optional<double> alpha;  // unset: 1 / n^2
    EstimateOptions estimate;
    unsigned threads = 1;
};

struct PipelineResult {
    DcorMatrices dcor;
    PeelingResult peeling;
    EstimationResult estimation;
};

// Default significance level for the independence tests, 1 / n^2.
double default_alpha(Index n);

// Independence screening, peeling, then GMM estimation with BY selection.
PipelineResult run_pipeline(const Matrix& X, const Matrix& Y, const PipelineOptions& opts);

} // namespace placid
