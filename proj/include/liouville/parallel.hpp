#pragma once

#include <functional>
#include <vector>

namespace lv {

// Worker count used by the evaluators; 0 means hardware concurrency.
void set_jobs(int jobs);
int jobs();

// Runs f(0..n-1) on the worker pool. Results land in index order, so reductions
// over the returned vector are deterministic regardless of the job count.
template <class T>
std::vector<T> parallel_map(int n, const std::function<T(int)>& f);

void parallel_for(int n, const std::function<void(int)>& f);

template <class T>
std::vector<T> parallel_map(int n, const std::function<T(int)>& f) {
    std::vector<T> out(n);
    parallel_for(n, [&](int i) { out[i] = f(i); });
    return out;
}

}  // namespace lv
