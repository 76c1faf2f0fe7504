#pragma once

#include <exception>
#include <mutex>
#include <utility>

namespace stw {

/// Environment variable consulted for the default worker count.
inline constexpr const char* kThreadsEnv = "STW_THREADS";

/// Worker count used by the OpenMP kernels. Defaults to $STW_THREADS when
/// set, else the OpenMP runtime default.
int thread_count();

/// Overrides the worker count for subsequent kernels; values < 1 reset to
/// the default.
void set_thread_count(int threads);

/// Exceptions must not leave an OpenMP region. Loop bodies run through
/// capture(); the first exception is rethrown after the region.
class ExceptionCollector {
 public:
  template <class F>
  void capture(F&& body) noexcept {
    try {
      std::forward<F>(body)();
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu_);
      if (!first_) first_ = std::current_exception();
    }
  }

  void rethrow() const {
    if (first_) std::rethrow_exception(first_);
  }

 private:
  std::mutex mu_;
  std::exception_ptr first_;
};

}  // namespace stw
