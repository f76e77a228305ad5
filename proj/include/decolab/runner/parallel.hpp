#pragma once

#include <cstddef>
#include <cstdlib>
#include <future>
#include <string>
#include <vector>

#include "decolab/errors.hpp"

namespace decolab::runner {

inline constexpr const char* kThreadsEnv = "DECOLAB_THREADS";

// Worker count from DECOLAB_THREADS; 1 when unset.
inline unsigned thread_count() {
    const char* v = std::getenv(kThreadsEnv);
    if (!v || !*v) return 1;
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 1 || n > 1024) {
        throw ValidationError(std::string(kThreadsEnv) + " must be an integer in [1, 1024], got '" +
                              v + "'");
    }
    return static_cast<unsigned>(n);
}

// out[i] = f(i), evaluated in batches of `threads`; order of results is the
// index order regardless of completion order. The first exception wins.
template <class F>
auto parallel_map(std::size_t n, F&& f, unsigned threads) {
    using T = decltype(f(std::size_t{0}));
    std::vector<T> out;
    out.reserve(n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) out.push_back(f(i));
        return out;
    }
    for (std::size_t start = 0; start < n; start += threads) {
        const std::size_t stop = std::min(n, start + threads);
        std::vector<std::future<T>> batch;
        for (std::size_t i = start; i < stop; ++i) {
            batch.push_back(std::async(std::launch::async, [&f, i] { return f(i); }));
        }
        for (auto& fut : batch) out.push_back(fut.get());
    }
    return out;
}

}  // namespace decolab::runner
