#pragma once

// Per-atom work distribution. Atoms are independent, every atom writes only
// its own output slot, so results do not depend on the thread count.

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

#include "condcvx/core.hpp"

namespace condcvx {

namespace detail {
inline std::atomic<int>& thread_setting() {
  static std::atomic<int> n{1};
  return n;
}
}  // namespace detail

inline void set_thread_count(int n) { detail::thread_setting() = std::max(1, n); }
inline int thread_count() { return detail::thread_setting(); }

/// Runs body(atom) for every atom. If several atoms throw, the exception of
/// the lowest atom is rethrown.
template <typename Body>
void for_each_atom(Index atoms, Body&& body) {
  const Index workers = std::min<Index>(thread_count(), atoms);
  if (workers <= 1) {
    for (Index i = 0; i < atoms; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(atoms));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (Index w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (Index i = w; i < atoms; i += workers) {
        try {
          body(i);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace condcvx
