#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace degen_dt {

/// Number of workers to use; 0 means "all hardware threads".
inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1U, std::thread::hardware_concurrency());
}

/// Splits [0, count) into contiguous index ranges, one per worker, and runs
/// `body(begin, end, state)` on a private State each. States are returned in
/// range order so callers can merge them deterministically.
template <typename State, typename Body>
std::vector<State> parallel_ranges(std::uint64_t count, unsigned threads, const State& init, Body body) {
  const unsigned workers = static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(resolve_threads(threads), count)));
  std::vector<State> states(workers, init);
  if (workers == 1) {
    body(std::uint64_t{0}, count, states[0]);
    return states;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = count * w / workers;
    const std::uint64_t end = count * (w + 1) / workers;
    pool.emplace_back([&, w, begin, end] {
      try {
        body(begin, end, states[w]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return states;
}

}  // namespace degen_dt
