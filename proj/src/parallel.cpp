#include "esfem/parallel.hpp"

#include <atomic>

namespace esfem {

namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int count) { g_threads.store(count < 1 ? 1 : count); }

int thread_count() { return g_threads.load(); }

}  // namespace esfem
