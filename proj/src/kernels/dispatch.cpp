#include "bridge/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace bridge::kernels {
namespace {

Backend select() {
    const char* forced = std::getenv("BRIDGE_KERNELS");
    if (forced && std::strcmp(forced, "scalar") == 0) return scalar_backend();
#if defined(__x86_64__)
    if (forced && std::strcmp(forced, "avx2") == 0) return avx2_backend();
    if (!forced && __builtin_cpu_supports("avx2")) return avx2_backend();
#endif
    return scalar_backend();
}

}  // namespace

const Backend& active() {
    static const Backend backend = select();
    return backend;
}

std::string backend_name() { return active().name; }

}  // namespace bridge::kernels
