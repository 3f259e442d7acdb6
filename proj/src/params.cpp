#include "surf/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace surf {

void SurfParams::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("SurfParams: " + msg); };
    if (n == 0 || n % 2 != 0) fail("n must be even and positive");
    if (k_u > n / 2) fail("k_u exceeds n/2");
    if (k_v > n / 2) fail("k_v exceeds n/2");
    if (2 * static_cast<int64_t>(k_u) - static_cast<int64_t>(k_v) > static_cast<int64_t>(n) / 2) {
        fail("2*k_u - k_v exceeds n/2");
    }
    if (w == 0 || w > n) fail("w out of range");
    if (lambda == 0) fail("lambda must be positive");
    if (lambda0 != 3 * lambda) fail("lambda0 must equal 3*lambda");
}

SurfParams select_params(uint32_t n, uint32_t lambda) {
    if (n < 64 || n % 2 != 0) {
        throw std::invalid_argument("select_params: n must be even and >= 64");
    }
    const long double ratio = (3.0L - sqrtl(5.0L)) / 4.0L;
    SurfParams p;
    p.n = n;
    p.w = static_cast<uint32_t>(floorl(ratio * static_cast<long double>(n)));
    p.k_v = p.w;
    p.k_u = n / 2 - p.w;
    p.lambda = lambda;
    p.lambda0 = 3 * lambda;
    p.validate();
    return p;
}

} // namespace surf
