#include "hybridpf/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace hybridpf {

void parallel_for(int n, int threads, const std::function<void(int, int)>& fn) {
    if (n <= 0) {
        return;
    }
    const int workers = std::min(std::max(threads, 1), n);
    if (workers == 1) {
        fn(0, n);
        return;
    }

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    std::exception_ptr error;
    std::mutex error_mutex;

    const int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int begin = w * chunk;
        const int end = std::min(n, begin + chunk);
        if (begin >= end) {
            break;
        }
        pool.emplace_back([&, begin, end] {
            try {
                fn(begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

int env_thread_cap() {
    const char* raw = std::getenv("HYBRIDPF_THREADS");
    if (raw == nullptr) {
        return 1;
    }
    try {
        const int cap = std::stoi(raw);
        return cap >= 1 ? cap : 1;
    } catch (...) {
        return 1;
    }
}

} // namespace hybridpf
