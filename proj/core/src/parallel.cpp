#include "mprb/parallel.hpp"

#include <omp.h>

namespace mprb {

namespace {
int default_threads() {
  static const int n = omp_get_max_threads();
  return n;
}
}  // namespace

void set_thread_count(int n) {
  const int base = default_threads();
  omp_set_num_threads(n < 1 ? base : n);
}

int thread_count() { return omp_get_max_threads(); }

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 16) {
    double s = 0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

}  // namespace mprb
