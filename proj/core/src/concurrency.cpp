#include "snndyn/concurrency.hpp"

#include <algorithm>
#include <cstdlib>

namespace snndyn {

namespace {

int default_workers() {
    if (const char* env = std::getenv("SNNDYN_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return static_cast<int>(std::min(v, 256L));
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::atomic<int>& worker_setting() {
    static std::atomic<int> value{default_workers()};
    return value;
}

}  // namespace

int max_workers() { return worker_setting().load(std::memory_order_relaxed); }

void set_max_workers(int n) {
    worker_setting().store(n >= 1 ? std::min(n, 256) : default_workers(),
                           std::memory_order_relaxed);
}

}  // namespace snndyn
