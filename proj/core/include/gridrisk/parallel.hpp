#pragma once

#include <cstddef>
#include <functional>

namespace gridrisk {

// Runs fn(task) for task in [0, task_count) on up to `jobs` threads. The task
// index, not the executing thread, determines any randomness, so results do
// not depend on scheduling. Rethrows the first exception raised by a task.
void parallel_for(std::size_t task_count, int jobs,
                  const std::function<void(std::size_t)>& fn);

int default_jobs();

}  // namespace gridrisk
