#ifndef HECKEL_PARALLEL_HPP_
#define HECKEL_PARALLEL_HPP_

#include "heckel/mp.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace heckel {

struct eval_context {
    prec_t prec = 128;
    unsigned threads = 1;
};

unsigned resolve_threads(unsigned requested);

/* out[i] = f(i). Scheduling varies with the worker count, the results
 * do not: callers reduce out[] sequentially in index order. */
template <class T, class F>
std::vector<T> parallel_map(size_t n, unsigned threads, F&& f)
{
    std::vector<std::optional<T>> slots(n);
    unsigned nt = std::min<size_t>(resolve_threads(threads), n ? n : 1);
    std::atomic<size_t> next{0};
    std::mutex mu;
    size_t err_index = n;
    std::exception_ptr err;
    auto work = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                slots[i].emplace(f(i));
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (i < err_index) {
                    err_index = i;
                    err = std::current_exception();
                }
            }
        }
    };
    if (nt <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nt; t++)
            pool.emplace_back(work);
        for (auto & th : pool)
            th.join();
    }
    if (err)
        std::rethrow_exception(err);
    std::vector<T> out;
    out.reserve(n);
    for (auto & s : slots)
        out.push_back(std::move(*s));
    return out;
}

}

#endif	/* HECKEL_PARALLEL_HPP_ */
