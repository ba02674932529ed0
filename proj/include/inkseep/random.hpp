#pragma once

#include <cstdint>
#include <random>

namespace inkseep {

/// Seedable random source with a fixed, portable mapping from raw engine
/// output to doubles and bounded integers. The engine is std::mt19937_64,
/// whose output sequence is pinned by the C++ standard, so identical seeds
/// give identical draws on every conforming platform. Standard-library
/// distributions are deliberately avoided (their streams are
/// implementation-defined). Identifier recorded in run manifests: see
/// kRandomSourceId.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) using the top 53 bits.
    double next_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    /// Uniform integer in [0, n). n must be > 0. Modulo bias is accepted;
    /// the mapping is part of the documented stream.
    std::uint64_t next_below(std::uint64_t n) { return engine_() % n; }

    bool next_bool() { return (engine_() & 1u) != 0; }

private:
    std::mt19937_64 engine_;
};

inline constexpr const char* kRandomSourceId = "mt19937_64/u53";

} // namespace inkseep
