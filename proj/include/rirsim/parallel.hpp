#pragma once

#include <cstddef>
#include <functional>

namespace rirsim {

// 0 means "all hardware threads".
unsigned resolve_threads(unsigned requested);

// Runs fn(task, worker) for task in [0, n_tasks) on up to `threads` workers.
// Tasks are handed out dynamically, so fn must only write task-owned state
// (or worker-owned scratch). The first exception thrown by a task is
// rethrown on the calling thread after all workers have stopped.
void parallel_for(std::size_t n_tasks, unsigned threads,
                  const std::function<void(std::size_t task, unsigned worker)>& fn);

}  // namespace rirsim
