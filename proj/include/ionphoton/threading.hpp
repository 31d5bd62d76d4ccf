#pragma once

#include <condition_variable>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ionphoton {

/// Persistent pool of workers for fork-join kernels. run(fn) executes
/// fn(chunk, n_chunks) once per chunk, with the calling thread taking one
/// chunk; it returns after all chunks finish. With size() == 1 everything
/// runs inline. Results must be written to disjoint locations per chunk, so
/// the outcome is independent of the worker count.
class WorkerPool {
  public:
    explicit WorkerPool(int n_threads) : n_(n_threads < 1 ? 1 : n_threads) {
        for (int i = 0; i + 1 < n_; ++i)
            workers_.emplace_back([this, i] { worker_loop(i); });
    }

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    ~WorkerPool() {
        {
            std::lock_guard lock(mutex_);
            stop_ = true;
            ++generation_;
        }
        cv_start_.notify_all();
        for (auto& w : workers_) w.join();
    }

    int size() const { return n_; }

    void run(const std::function<void(int, int)>& fn) {
        if (n_ == 1) {
            fn(0, 1);
            return;
        }
        {
            std::lock_guard lock(mutex_);
            job_ = &fn;
            pending_ = n_ - 1;
            ++generation_;
        }
        cv_start_.notify_all();
        fn(n_ - 1, n_);
        std::unique_lock lock(mutex_);
        cv_done_.wait(lock, [this] { return pending_ == 0; });
        job_ = nullptr;
    }

  private:
    void worker_loop(int index) {
        long seen = 0;
        for (;;) {
            const std::function<void(int, int)>* job = nullptr;
            {
                std::unique_lock lock(mutex_);
                cv_start_.wait(lock, [this, &seen] { return generation_ != seen; });
                seen = generation_;
                if (stop_) return;
                job = job_;
            }
            (*job)(index, n_);
            {
                std::lock_guard lock(mutex_);
                --pending_;
            }
            cv_done_.notify_one();
        }
    }

    int n_;
    std::vector<std::thread> workers_;
    std::mutex mutex_;
    std::condition_variable cv_start_, cv_done_;
    const std::function<void(int, int)>* job_ = nullptr;
    int pending_ = 0;
    long generation_ = 0;
    bool stop_ = false;
};

}  // namespace ionphoton
