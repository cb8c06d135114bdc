#include "parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace surv::detail {

int thread_count() {
    const char* env = std::getenv("SURVMAIL_THREADS");
    if (!env) return 1;
    int value = std::atoi(env);
    return std::clamp(value, 1, 64);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& chunk) {
    int workers = thread_count();
    if (workers <= 1 || n < 1024) {
        chunk(0, n);
        return;
    }
    std::size_t per = (n + static_cast<std::size_t>(workers) - 1) /
                      static_cast<std::size_t>(workers);
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
        std::size_t begin = static_cast<std::size_t>(w) * per;
        if (begin >= n) break;
        std::size_t end = std::min(begin + per, n);
        threads.emplace_back([&chunk, begin, end] { chunk(begin, end); });
    }
    for (auto& t : threads) t.join();
}

}  // namespace surv::detail
