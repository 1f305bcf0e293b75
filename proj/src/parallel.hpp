#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace qfal {

// Resolves a worker count: `requested` <= 0 means hardware concurrency.
// The QFAL_THREADS environment variable, when set, caps the result.
int effective_threads(int requested);

// Runs body(i) for i in [0, n) on up to `threads` workers. Work items must
// be independent; callers that reduce results must do so afterwards in
// index order so the outcome does not depend on scheduling. The first
// exception thrown by any item is rethrown after all workers join.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace qfal
