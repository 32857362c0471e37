#include "liouville/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace lv {

namespace {

int initial_jobs() {
    if (const char* env = std::getenv("LIOUVILLE_JOBS")) {
        int j = std::atoi(env);
        if (j > 0) return j;
    }
    return 0;
}

std::atomic<int> g_jobs{initial_jobs()};

}  // namespace

void set_jobs(int j) { g_jobs = std::max(0, j); }

int jobs() {
    int j = g_jobs;
    if (j > 0) return j;
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int n, const std::function<void(int)>& f) {
    int w = std::min(jobs(), n);
    if (w <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex m;
    auto run = [&] {
        for (;;) {
            int i = next++;
            if (i >= n) return;
            try {
                f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(m);
                if (!err) err = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < w; ++t) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace lv
