#include "krein/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <string>

namespace krein::parallel {

namespace {

std::atomic<int> override_count{0};

int from_environment() {
  const int max = omp_get_max_threads();
  if (const char* env = std::getenv("KREIN_LAB_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n < max ? n : max;
    } catch (...) {
    }
  }
  return max;
}

}  // namespace

int thread_count() {
  const int n = override_count.load();
  if (n > 0) return n;
  static const int env = from_environment();
  return env;
}

void set_thread_count(int n) { override_count.store(n > 0 ? n : 0); }

}  // namespace krein::parallel
