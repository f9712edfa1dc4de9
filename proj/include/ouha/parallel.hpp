#pragma once

#include <cstddef>
#include <functional>

namespace ouha {

// Calls body(i) for i in [0, n) on up to `threads` workers (0: hardware
// concurrency).  Each index runs exactly once; results must be written by
// index so the outcome does not depend on scheduling.  The first exception
// thrown by any body is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

}  // namespace ouha
