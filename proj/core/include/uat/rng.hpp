#pragma once

#include <cstdint>

namespace uat {

/// Counter-based random stream: draw i depends only on (seed, i), so per-ray
/// noise comes out identical whether entries are generated serially or in
/// parallel, and runs with the same seed are bit-reproducible.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed);

    /// Uniform in [0, 1).
    double uniform(std::uint64_t counter) const;

    /// Standard normal via Box-Muller on two decorrelated uniforms.
    double normal(std::uint64_t counter) const;

private:
    std::uint64_t key_;
};

}  // namespace uat
