#ifndef INCOMPAT_PARALLEL_HPP
#define INCOMPAT_PARALLEL_HPP

// Deterministic fan-out for independent work items.  Callers write results
// into index-addressed slots, so the outcome never depends on scheduling and
// stays byte-identical across worker counts.

#include <functional>

namespace incompat {

// Worker cap: the INCOMPAT_THREADS environment variable when it parses to a
// positive integer, otherwise the hardware concurrency (at least 1).
int worker_count();

// Runs body(0 .. n-1) on up to worker_count() threads.  The first exception
// thrown by any item is rethrown on the calling thread after all workers
// join; remaining items are skipped on failure.
void parallel_for(int n, const std::function<void(int)>& body);

} // namespace incompat

#endif
