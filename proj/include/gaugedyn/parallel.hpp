#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gaugedyn {

/// Default worker count: GAUGEDYN_THREADS if set and positive, else hardware concurrency.
[[nodiscard]] unsigned default_thread_count();

/// Calls body(row) for every row in [0, rows), split into contiguous blocks across
/// `threads` workers. Rows are independent, so the result never depends on the split.
template <class Body>
void parallel_rows(std::size_t rows, unsigned threads, Body&& body) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(rows, 1))));
    if (threads == 1) {
        for (std::size_t r = 0; r < rows; ++r) body(r);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::size_t block = (rows + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t begin = t * block;
        const std::size_t end = std::min(rows, begin + block);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t r = begin; r < end; ++r) body(r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace gaugedyn
