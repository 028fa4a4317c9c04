#pragma once

#include <cstddef>
#include <vector>

namespace bemc {

// Batch-means estimate of the long-run variance lim Var(sum y_k)/n for a
// stationary-ish sequence: split into floor(n/len) batches of length len,
// take len * sample variance of the batch means. len = 0 picks floor(sqrt(n)).
double batch_means_variance(const std::vector<double>& y, std::size_t len = 0);

}  // namespace bemc
