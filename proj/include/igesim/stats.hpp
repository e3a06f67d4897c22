#pragma once

#include <utility>
#include <vector>

namespace igesim {

// Sorted (value, cumulative_fraction) pairs; fraction of the i-th sorted
// value is (i + 1) / n.
std::vector<std::pair<double, double>> make_cdf(std::vector<double> values);

double mean(const std::vector<double>& v);
double stddev(const std::vector<double>& v);

// Linear-interpolation quantile of a sorted vector, p in [0, 1].
double quantile_sorted(const std::vector<double>& sorted, double p);

struct BoxStats {
  double q1 = 0.0, median = 0.0, q3 = 0.0;
  double whisker_lo = 0.0, whisker_hi = 0.0;  // Tukey 1.5*IQR, clamped to data
};
BoxStats box_stats(std::vector<double> values);

// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

double fraction_below(const std::vector<double>& values, double threshold);
double fraction_in_range(const std::vector<double>& values, double lo, double hi);

}  // namespace igesim
