#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace symfield {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or malformed inputs.
struct ArgumentError : Error {
    using Error::Error;
};

/// An enumeration would exceed the configured element budget.
struct BudgetError : Error {
    using Error::Error;
};

/// Checked 64-bit integer arithmetic overflowed.
struct OverflowError : Error {
    using Error::Error;
};

/// A mathematically guaranteed condition failed to hold.
struct InternalError : Error {
    using Error::Error;
};

inline std::uint64_t checked_add_u64(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in addition");
    return r;
}

inline std::uint64_t checked_mul_u64(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in multiplication");
    return r;
}

inline std::uint64_t checked_pow_u64(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < exp; ++i) r = checked_mul_u64(r, base);
    return r;
}

inline std::optional<std::uint64_t> try_pow_u64(std::uint64_t base, std::uint64_t exp) noexcept {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (__builtin_mul_overflow(r, base, &r)) return std::nullopt;
    }
    return r;
}

}  // namespace symfield
