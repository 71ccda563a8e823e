// SPDX-License-Identifier: Apache-2.0

#include "oat/kernels.hpp"

#include <cstdlib>

namespace oat::kernels {

bool avx2_available() {
#if (defined(__x86_64__) || defined(_M_X64)) && defined(OAT_HAVE_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

static const Backend* select_backend() {
    const char* force = std::getenv("OAT_FORCE_SCALAR");
    if (force && force[0] == '1') return &kScalarBackend;
#if (defined(__x86_64__) || defined(_M_X64)) && defined(OAT_HAVE_AVX2)
    if (avx2_available()) return &kAvx2Backend;
#endif
    return &kScalarBackend;
}

const Backend& active() {
    static const Backend* backend = select_backend();
    return *backend;
}

}  // namespace oat::kernels
