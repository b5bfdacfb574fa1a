#pragma once

#include <cstddef>
#include <functional>

namespace willmore {

/// Number of worker threads used by node loops (1 = serial, the default).
void set_thread_count(int n);
int thread_count();

/// Runs body(begin, end) over contiguous blocks covering [0, n).
///
/// Blocks are disjoint, so writes to distinct indices are race free. Callers
/// that reduce must combine per-index partials in index order afterwards;
/// nothing here depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace willmore
