#include "tcmfg/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace tcmfg {
namespace {

std::atomic<std::size_t> g_override{0};

std::size_t env_threads() {
    const char* env = std::getenv("TCMFG_THREADS");
    if (env == nullptr) return 0;
    try {
        long v = std::stol(env);
        return v > 0 ? static_cast<std::size_t>(v) : 0;
    } catch (...) {
        return 0;
    }
}

} // namespace

std::size_t worker_count() {
    if (auto o = g_override.load(); o > 0) return o;
    if (auto e = env_threads(); e > 0) return e;
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void set_worker_count(std::size_t n) { g_override.store(n); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
    // below this size thread start-up dominates
    constexpr std::size_t kMinChunk = 1024;
    std::size_t workers = std::min(worker_count(), (n + kMinChunk - 1) / kMinChunk);
    if (workers <= 1) {
        if (n > 0) body(0, n);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 1; w < workers; ++w) {
        std::size_t b = w * chunk;
        std::size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&body, b, e] { body(b, e); });
    }
    body(0, std::min(n, chunk));
}

} // namespace tcmfg
