#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kgsynth {

/// 64-bit FNV-1a. Stable across platforms and runs; used for seed
/// derivation, request ids and config hashes.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

std::string hex64(std::uint64_t value);

/// Mix a seed with a key into an independent child seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view key) noexcept;
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Seeded generator with platform-independent draws. The standard
/// distributions are implementation-defined, so integer and real draws are
/// done here on top of mt19937_64.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, n). n must be positive.
    std::size_t uniform_index(std::size_t n);

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform01();

    /// Standard normal via Box-Muller.
    double normal();

    /// k distinct indices from [0, n) in draw order (partial Fisher-Yates).
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

    template <class T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[uniform_index(i)]);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace kgsynth
