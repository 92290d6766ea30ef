#include "pseudofrac/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace pseudofrac {
namespace {

thread_local bool g_inside_region = false;

}  // namespace

std::size_t thread_budget() {
  if (const char* env = std::getenv("PSEUDOFRAC_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (...) {
      // malformed value: fall through to auto
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t min_chunk) {
  const std::size_t width =
      g_inside_region ? 1 : std::min(thread_budget(), std::max<std::size_t>(1, count / min_chunk));
  if (width <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(width);
  const std::size_t chunk = (count + width - 1) / width;
  for (std::size_t w = 0; w < width; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([begin, end, &body] {
      g_inside_region = true;
      for (std::size_t i = begin; i < end; ++i) body(i);
    });
  }
  for (auto& t : workers) t.join();
}

}  // namespace pseudofrac
