#include "afa/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace afa {

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const int workers = static_cast<int>(
        std::min<std::size_t>(count, static_cast<std::size_t>(threads)));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                fn(i);
            }
        });
    }
    for (auto& worker : pool) worker.join();
}

}  // namespace afa
