#pragma once

#include <cstdint>
#include <span>

#include "qattack/graph.hpp"
#include "qattack/partition.hpp"

namespace qattack::metrics {

// Community form: sum_i (e_ii - a_i^2).
double modularity(const Graph& g, const Partition& p);

// Matrix form (1/4m) s^T B s for a +-1 sign vector.
double modularity_matrix(const Graph& g, std::span<const int> signs);

struct NmiResult {
  double value = 0.0;
  bool degenerate = false;  // both partitions trivial
};

NmiResult nmi_checked(const Partition& x, const Partition& y);
inline double nmi(const Partition& x, const Partition& y) { return nmi_checked(x, y).value; }

// (before - after) / before as a fraction.
double relative_reduction(double before, double after);

}  // namespace qattack::metrics
