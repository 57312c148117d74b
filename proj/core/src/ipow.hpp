// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace jumpsde::detail {

// Binary powering for n >= 1. Shared by scalar and jet evaluation so that a
// jet's order-0 coefficient reproduces the scalar result bit for bit.
template <class T>
T ipow_positive(const T& base, unsigned long n) {
    T acc = base;
    T result = base;
    bool have_result = false;
    while (n != 0) {
        if (n & 1UL) {
            result = have_result ? result * acc : acc;
            have_result = true;
        }
        n >>= 1U;
        if (n != 0) {
            acc = acc * acc;
        }
    }
    return result;
}

}  // namespace jumpsde::detail
