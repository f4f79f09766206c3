#include "gaugedyn/parallel.hpp"

#include <cstdlib>
#include <string>

namespace gaugedyn {

unsigned default_thread_count() {
    if (const char* env = std::getenv("GAUGEDYN_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (...) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace gaugedyn
