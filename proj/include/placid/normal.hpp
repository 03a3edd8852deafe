#pragma once

namespace placid {

// Standard normal CDF.
double normal_cdf(double z);

// Inverse of the standard normal CDF. Throws InvalidArgument unless 0 < p < 1.
double normal_quantile(double p);

} // namespace placid
