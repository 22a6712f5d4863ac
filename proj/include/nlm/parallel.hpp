// Copyright 2026 The nlmagic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nlm {

namespace detail {
inline thread_local int parallel_depth = 0;
}

// Runs fn(i) for i in [0, n). Iterations must be independent; each should
// write only its own output slot so results do not depend on scheduling.
// Nested invocations run inline to avoid thread oversubscription.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const unsigned hw = std::thread::hardware_concurrency();
  const std::size_t workers = std::min<std::size_t>(hw == 0 ? 1 : hw, n);
  if (workers <= 1 || detail::parallel_depth > 0) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::mutex mu;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      ++detail::parallel_depth;
      for (std::size_t i = w; i < n; i += workers) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
      --detail::parallel_depth;
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace nlm
