#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace pasf {

// Process-wide worker count for data-parallel candidate loops. Results never
// depend on it: every reduction below is a deterministic argmin/argmax with
// ties broken by lowest index.
void set_thread_count(unsigned n);
unsigned thread_count();

namespace detail {
inline std::atomic<unsigned>& thread_count_slot() {
    static std::atomic<unsigned> n{0};  // 0 = hardware default
    return n;
}
}  // namespace detail

inline void set_thread_count(unsigned n) { detail::thread_count_slot() = n; }

inline unsigned thread_count() {
    const unsigned n = detail::thread_count_slot().load();
    if (n > 0) return n;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Evaluate f(i) for i in [0, n) and keep, per index, a score. Returns the
// index of the best (smallest if minimize, else largest) score; ties go to
// the lowest index regardless of thread schedule.
template <typename ScoreFn>
std::size_t best_index_parallel(std::size_t n, bool minimize, ScoreFn&& f,
                                std::vector<double>* scores_out = nullptr) {
    std::vector<double> scores(n);
    const unsigned workers = std::min<std::size_t>(thread_count(), n == 0 ? 1 : n);
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) scores[i] = f(i);
    } else {
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                scores[i] = f(i);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
        const bool better = minimize ? scores[i] < scores[best] : scores[i] > scores[best];
        if (better) best = i;
    }
    if (scores_out) *scores_out = std::move(scores);
    return best;
}

}  // namespace pasf
