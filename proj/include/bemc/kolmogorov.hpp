#pragma once

#include <vector>

namespace bemc {

// Exact Kolmogorov distance between the empirical distribution of `sorted`
// (ascending) and the standard normal: the sup is attained at a jump of the
// ECDF, so it suffices to compare both one-sided gaps at each order statistic.
double kolmogorov_distance_sorted(const std::vector<double>& sorted);

// Convenience overload that copies and sorts.
double kolmogorov_distance(std::vector<double> values);

}  // namespace bemc
