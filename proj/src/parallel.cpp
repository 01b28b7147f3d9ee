#include "fraclap/parallel.hpp"

#include <cstdlib>
#include <string>

namespace fraclap {

namespace {
std::atomic<int> overrideJobs{0};
}

int defaultJobs() {
    if (const int j = overrideJobs.load(); j > 0) return j;
    if (const char* env = std::getenv("FRACLAP_JOBS")) {
        try {
            const int j = std::stoi(env);
            if (j > 0) return j;
        } catch (...) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void setDefaultJobs(int jobs) { overrideJobs.store(jobs > 0 ? jobs : 0); }

}  // namespace fraclap
