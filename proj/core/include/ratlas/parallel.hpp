#pragma once

#include <cstddef>
#include <functional>

namespace ratlas {

/// Number of worker threads used by parallel maps. Resolution order:
/// explicit set_worker_count(), REGION_ATLAS_THREADS, hardware concurrency.
std::size_t worker_count();

/// Caps the worker count process-wide; 0 restores the default resolution.
void set_worker_count(std::size_t n);

/// Chunked parallel map over [0, n). Results must be written to
/// index-addressed storage by the callable; the partition is by contiguous
/// ranges so output ordering never depends on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t begin, std::size_t end)>& body);

}  // namespace ratlas
