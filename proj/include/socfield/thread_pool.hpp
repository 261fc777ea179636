#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace socfield {

/// Fixed set of workers executing statically partitioned index ranges. Each
/// parallel_for call is a complete phase: it returns only after every item ran,
/// which is the barrier between pipeline phases. Items must write only state they
/// own; the pool adds no synchronization around item execution.
class ThreadPool {
public:
    explicit ThreadPool(int workers);
    ~ThreadPool();

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    int workers() const noexcept { return static_cast<int>(threads_.size()); }

    /// Runs fn(worker, begin, end) over a static partition of [0, n). Blocks until
    /// all workers finish; rethrows the first captured worker exception.
    void parallel_for(std::size_t n, const std::function<void(int, std::size_t, std::size_t)>& fn);

private:
    void worker_loop(int id);

    std::vector<std::thread> threads_;
    std::mutex mutex_;
    std::condition_variable start_cv_;
    std::condition_variable done_cv_;
    const std::function<void(int, std::size_t, std::size_t)>* job_ = nullptr;
    std::size_t job_items_ = 0;
    std::size_t generation_ = 0;
    int pending_ = 0;
    bool stopping_ = false;
    std::vector<std::exception_ptr> errors_;
};

} // namespace socfield
