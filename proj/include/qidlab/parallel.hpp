#pragma once

#include <cstddef>
#include <functional>

namespace qidlab {

// Thread cap: QIDLAB_THREADS if set, otherwise hardware concurrency.
int max_threads();

// Static-chunked parallel loop. Callers write results into preallocated
// slots indexed by i, so output is identical for any thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace qidlab
