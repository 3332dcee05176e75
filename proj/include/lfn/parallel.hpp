#pragma once

#include <cstdint>
#include <functional>

namespace lfn::parallel {

// Worker count used by for_blocks. 0 restores the hardware default.
void set_thread_count(int n);
int thread_count();

// Runs body(begin, end) over a static partition of [0, n). Results must be
// written to per-index slots; the partition does not depend on the thread
// count observable side effects, so outputs are deterministic. The first
// exception thrown by a worker is rethrown on the caller.
void for_blocks(int64_t n, const std::function<void(int64_t, int64_t)>& body);

}  // namespace lfn::parallel
