#include "exfun/parallel.hpp"

#include <cstdlib>
#include <string>

namespace exfun {

unsigned thread_budget() {
    if (const char* env = std::getenv("GBM_EXFUN_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (...) {
            // fall through to auto
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

}  // namespace exfun
