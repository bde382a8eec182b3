#ifndef MIXBESOV_PARALLEL_HPP
#define MIXBESOV_PARALLEL_HPP

#include <cstddef>
#include <cstdlib>
#include <memory>
#include <string>

#include <tbb/global_control.h>
#include <tbb/parallel_for.h>

namespace mixbesov {

/// Worker cap from MIXBESOV_THREADS; 0 means "let the scheduler decide".
inline std::size_t thread_cap_from_env() {
  const char* raw = std::getenv("MIXBESOV_THREADS");
  if (!raw || !*raw) return 0;
  try {
    const long v = std::stol(raw);
    return v > 0 ? static_cast<std::size_t>(v) : 0;
  } catch (...) {
    return 0;
  }
}

namespace detail {
inline tbb::global_control* thread_limit() {
  static std::unique_ptr<tbb::global_control> control = [] {
    const std::size_t cap = thread_cap_from_env();
    return cap ? std::make_unique<tbb::global_control>(
                     tbb::global_control::max_allowed_parallelism, cap)
               : nullptr;
  }();
  return control.get();
}
}  // namespace detail

// Runs body(i) for i in [0, n). Bodies must only write to slots owned by i;
// callers reduce afterwards in index order.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  detail::thread_limit();
  if (n == 0) return;
  if (n == 1) {
    body(std::size_t{0});
    return;
  }
  tbb::parallel_for(std::size_t{0}, n, [&](std::size_t i) { body(i); });
}

}  // namespace mixbesov

#endif  // MIXBESOV_PARALLEL_HPP
