#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hk {

// All linking-matrix arithmetic is exact int64 with mandatory overflow
// detection. Silent wraparound would corrupt a certificate.
struct overflow_error : std::runtime_error {
    explicit overflow_error(const std::string& what) : std::runtime_error(what) {}
};

inline std::int64_t ck_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw overflow_error("int64 overflow in add");
    return r;
}

inline std::int64_t ck_sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw overflow_error("int64 overflow in sub");
    return r;
}

inline std::int64_t ck_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw overflow_error("int64 overflow in mul");
    return r;
}

inline std::int64_t ck_neg(std::int64_t a) { return ck_sub(0, a); }

}  // namespace hk
