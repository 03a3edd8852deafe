#include "placid/pipeline.hpp"

namespace placid {

double default_alpha(Index n) {
    if (n < 2) throw InvalidArgument("at least two samples are required");
    double nn = static_cast<double>(n);
    return 1.0 / (nn * nn);
}

PipelineResult run_pipeline(const Matrix& X, const Matrix& Y, const PipelineOptions& opts) {
    PipelineResult res;
    double alpha = opts.alpha ? *opts.alpha : default_alpha(static_cast<Index>(Y.rows()));
    res.dcor = independence_matrices(X, Y, alpha, opts.threads);
    res.peeling = estimate_arg(res.dcor);
    res.estimation = estimate(X, Y, res.peeling.arg, opts.estimate);
    return res;
}

} // namespace placid
