#include "betheforge/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace betheforge {

void apply_thread_env() {
  const char* env = std::getenv("BETHEFORGE_THREADS");
  if (env == nullptr) return;
  int n = 0;
  try {
    n = std::stoi(env);
  } catch (...) {
    return;
  }
  if (n > 0) omp_set_num_threads(n);
}

int thread_count() { return omp_get_max_threads(); }

}  // namespace betheforge
