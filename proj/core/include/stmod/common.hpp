#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

namespace stmod {

/* Base class for all errors raised by the library. */
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* Malformed input: bad profiles, inconsistent documents, bad flags. */
struct ValidationError : Error {
    using Error::Error;
};

/* A computation window (s_max/t_max/cap) was exhausted before a decision. */
struct WindowError : Error {
    using Error::Error;
};

/* Worker count for parallel scans: STMOD_WORKERS overrides hardware_concurrency. */
inline unsigned worker_count()
{
    if (const char* env = std::getenv("STMOD_WORKERS")) {
        long n = std::strtol(env, nullptr, 10);
        if (n >= 1)
            return static_cast<unsigned>(n);
    }
    unsigned n = std::thread::hardware_concurrency();
    return n ? n : 1;
}

}  // namespace stmod
