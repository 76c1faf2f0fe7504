#include "stw/parallel.hpp"

#include <atomic>
#include <cstdlib>

#include <omp.h>

namespace stw {
namespace {

std::atomic<int> g_override{0};

int default_threads() {
  if (const char* env = std::getenv(kThreadsEnv)) {
    int t = std::atoi(env);
    if (t > 0) return t;
  }
  return omp_get_max_threads();
}

}  // namespace

int thread_count() {
  int t = g_override.load();
  return t > 0 ? t : default_threads();
}

void set_thread_count(int threads) { g_override.store(threads > 0 ? threads : 0); }

}  // namespace stw
