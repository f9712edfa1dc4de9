#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace ouha::kernels::detail {

inline constexpr std::size_t kMaxHermiteTerms = 257;

// Recurrence h_{k+1} = a_k x h_k - b_k h_{k-1} for orthonormal Hermite polynomials,
// a_k = sqrt(2/(k+1)), b_k = sqrt(k/(k+1)).
struct HermiteRecurrence {
    std::array<double, kMaxHermiteTerms> a{};
    std::array<double, kMaxHermiteTerms> b{};
};

inline const HermiteRecurrence& hermite_recurrence() {
    static const HermiteRecurrence table = [] {
        HermiteRecurrence r;
        for (std::size_t k = 0; k < kMaxHermiteTerms; ++k) {
            r.a[k] = std::sqrt(2.0 / double(k + 1));
            r.b[k] = std::sqrt(double(k) / double(k + 1));
        }
        return r;
    }();
    return table;
}

}  // namespace ouha::kernels::detail
