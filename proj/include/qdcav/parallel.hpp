#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qdcav {

// Runs body(begin, end) over [0, count) split into contiguous blocks of
// block_size; blocks are handed to at most `threads` workers. Callers write
// results into per-index (or per-block) slots and reduce in index order, so
// outputs do not depend on the worker count.
template <class Body>
void parallel_blocks(std::size_t count, std::size_t block_size, unsigned threads, Body&& body)
{
    if (count == 0) return;
    block_size = std::max<std::size_t>(block_size, 1);
    const std::size_t blocks = (count + block_size - 1) / block_size;
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, blocks);
    if (workers == 1) {
        for (std::size_t b = 0; b < blocks; ++b) {
            body(b * block_size, std::min(count, (b + 1) * block_size));
        }
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t b = w; b < blocks; b += workers) {
                    body(b * block_size, std::min(count, (b + 1) * block_size));
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

// Neumaier-compensated accumulator.
class CompensatedSum {
public:
    void add(double x)
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace qdcav
