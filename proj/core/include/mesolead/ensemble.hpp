// Copyright 2026 The mesolead Authors
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

#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

#include "mesolead/errors.hpp"

namespace mesolead {

/// Runs task(i) for i in [0, n) on `workers` threads and returns the results
/// in index order, so the output does not depend on scheduling. The first
/// failing index (in index order) is rethrown as a TrajectoryError.
template <class T>
std::vector<T> run_ensemble(std::uint64_t n, unsigned workers, const std::function<T(std::uint64_t)>& task) {
  if (workers == 0) workers = 1;
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};

  auto worker = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        slots[i].emplace(task(i));
      } catch (...) {
        errors[i] = std::current_exception();
        failed.store(true);
      }
    }
  };

  const unsigned threads = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(n, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
  }

  for (std::uint64_t i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const TrajectoryError&) {
      throw;
    } catch (const std::exception& e) {
      throw TrajectoryError(i, 0.0, e.what());
    }
  }
  std::vector<T> out;
  out.reserve(n);
  for (auto& slot : slots) {
    if (!slot) throw std::runtime_error("run_ensemble: task skipped after failure");
    out.push_back(std::move(*slot));
  }
  return out;
}

}  // namespace mesolead
