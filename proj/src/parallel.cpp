#include "parallel.hpp"

#include <atomic>

namespace liokam {

namespace {
std::atomic<int> g_jobs{1};
}

void set_jobs(int n) { g_jobs.store(n < 1 ? 1 : n); }
int jobs() { return g_jobs.load(); }

}  // namespace liokam
