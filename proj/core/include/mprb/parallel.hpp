#pragma once

#include <span>

namespace mprb {

// Caps OpenMP worker count for every parallel region in the library.
// Values < 1 restore the runtime default. Results never depend on it.
void set_thread_count(int n);
int thread_count();

// Fixed-tree pairwise sum; the reduction order depends only on the length.
double pairwise_sum(std::span<const double> v);

}  // namespace mprb
