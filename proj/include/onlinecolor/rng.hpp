#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace onlinecolor {

/// Seeded random source. Draws depend only on (seed, stream) and the call
/// sequence: the engine is std::mt19937_64 (fully specified by the standard)
/// and all conversions to doubles/indices are done here, not by
/// std::*_distribution, whose output is implementation-defined.
class RngHandle {
public:
    RngHandle(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform in [0, 1) with 53 random bits.
    double uniform01();
    /// Uniform in [0, bound); bound > 0.
    std::uint64_t uniform_index(std::uint64_t bound);

    /// Derives an independent handle for a sub-task.
    RngHandle fork(std::uint64_t stream) const { return RngHandle(seed_, stream); }

    template <class T>
    void shuffle(std::span<T> xs) {
        for (std::size_t i = xs.size(); i > 1; --i) {
            auto j = static_cast<std::size_t>(uniform_index(i));
            std::swap(xs[i - 1], xs[j]);
        }
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace onlinecolor
