// Copyright 2026 The pathint Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PATHINT_PARALLEL_HPP_
#define PATHINT_PARALLEL_HPP_

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pathint {

/// Number of worker threads to use; 0 means one per hardware thread.
inline int resolve_thread_count(int requested, int work_items) {
  int threads = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, threads);
  return std::min(threads, std::max(1, work_items));
}

/// Calls body(begin, end) over contiguous chunks of [0, count). Chunks are
/// disjoint, so a body that only writes to its own indices needs no locking.
/// The first exception thrown by any chunk is rethrown on the calling thread.
template <class Body>
void parallel_for(int count, int requested_threads, Body&& body) {
  if (count <= 0) {
    return;
  }
  const int threads = resolve_thread_count(requested_threads, count);
  if (threads == 1) {
    body(0, count);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> workers;
  workers.reserve(static_cast<std::size_t>(threads));
  const int chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int begin = t * chunk;
    const int end = std::min(count, begin + chunk);
    if (begin >= end) {
      break;
    }
    workers.emplace_back([&, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
      }
    });
  }
  workers.clear();
  if (failure) {
    std::rethrow_exception(failure);
  }
}

}  // namespace pathint

#endif  // PATHINT_PARALLEL_HPP_
