#pragma once

#include <array>
#include <cstdint>

namespace pathwise {

/// Philox4x32-10 (Salmon et al., SC'11): a keyed bijection on 128-bit
/// counters. Output depends only on (key, counter), so streams are
/// reproducible across platforms and can be generated in any order.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Standard normal keyed by (seed, stream, index): Box-Muller on the two
/// 64-bit halves of one Philox block.
double keyed_normal(std::uint64_t seed, std::uint32_t stream, std::uint64_t index);

/// Uniform in [0, 1) keyed the same way.
double keyed_uniform(std::uint64_t seed, std::uint32_t stream, std::uint64_t index);

}  // namespace pathwise
