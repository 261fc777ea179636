#include "socfield/thread_pool.hpp"

namespace socfield {

ThreadPool::ThreadPool(int workers) {
    if (workers < 1) workers = 1;
    errors_.resize(static_cast<std::size_t>(workers));
    threads_.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        threads_.emplace_back([this, w] { worker_loop(w); });
    }
}

ThreadPool::~ThreadPool() {
    {
        std::lock_guard lock(mutex_);
        stopping_ = true;
    }
    start_cv_.notify_all();
    for (auto& t : threads_) t.join();
}

void ThreadPool::parallel_for(std::size_t n,
                              const std::function<void(int, std::size_t, std::size_t)>& fn) {
    std::unique_lock lock(mutex_);
    job_ = &fn;
    job_items_ = n;
    pending_ = workers();
    ++generation_;
    std::fill(errors_.begin(), errors_.end(), nullptr);
    start_cv_.notify_all();
    done_cv_.wait(lock, [this] { return pending_ == 0; });
    job_ = nullptr;
    for (auto& err : errors_) {
        if (err) std::rethrow_exception(err);
    }
}

void ThreadPool::worker_loop(int id) {
    std::size_t seen_generation = 0;
    for (;;) {
        const std::function<void(int, std::size_t, std::size_t)>* job;
        std::size_t items;
        {
            std::unique_lock lock(mutex_);
            start_cv_.wait(lock, [&] { return stopping_ || generation_ != seen_generation; });
            if (stopping_) return;
            seen_generation = generation_;
            job = job_;
            items = job_items_;
        }
        const std::size_t w = static_cast<std::size_t>(workers());
        const std::size_t begin = items * static_cast<std::size_t>(id) / w;
        const std::size_t end = items * (static_cast<std::size_t>(id) + 1) / w;
        try {
            if (begin < end) (*job)(id, begin, end);
        } catch (...) {
            std::lock_guard lock(mutex_);
            errors_[static_cast<std::size_t>(id)] = std::current_exception();
        }
        {
            std::lock_guard lock(mutex_);
            if (--pending_ == 0) done_cv_.notify_all();
        }
    }
}

} // namespace socfield
