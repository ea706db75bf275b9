// SPDX-License-Identifier: Apache-2.0
//
// omnisim: simulator and optimizer for intelligent omni-surface assisted links
// Copyright (C) 2026 The omnisim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef OMNISIM_PARALLEL_HPP
#define OMNISIM_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace omnisim
{

/// Worker cap: OMNISIM_THREADS if set (must be a positive integer), else the
/// hardware concurrency.
std::size_t thread_limit();

/// Calls body(begin, end, chunk) over `count` indices split into contiguous
/// chunks, one per worker. Chunk boundaries depend only on `count` and the
/// worker count; callers that combine per-chunk results in chunk order get
/// results independent of scheduling.
template <typename Body>
void parallel_chunks(std::size_t count, std::size_t chunks, Body &&body)
{
    chunks = std::max<std::size_t>(1, std::min(chunks, count));
    if (chunks <= 1)
    {
        body(std::size_t{0}, count, std::size_t{0});
        return;
    }

    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> workers;
        workers.reserve(chunks);
        for (std::size_t c = 0; c < chunks; ++c)
        {
            const std::size_t begin = count * c / chunks;
            const std::size_t end = count * (c + 1) / chunks;
            workers.emplace_back([&, begin, end, c] {
                try
                {
                    body(begin, end, c);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            });
        }
    }
    if (failure)
        std::rethrow_exception(failure);
}

/// Runs fn(i) for every i in [0, count) on up to `thread_limit()` workers.
template <typename Fn>
void parallel_for(std::size_t count, Fn &&fn)
{
    parallel_chunks(count, thread_limit(), [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t i = begin; i < end; ++i)
            fn(i);
    });
}

} // namespace omnisim

#endif
