#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace dictprompt {

// Standard distributions are implementation-defined, so sampling is done by
// hand on top of mt19937_64 to keep runs bit-identical across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n)
    {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    /// Uniform Fisher-Yates shuffle.
    template <class T>
    void shuffle(std::span<T> items)
    {
        for (std::size_t i = items.size(); i > 1; --i) {
            using std::swap;
            swap(items[i - 1], items[below(i)]);
        }
    }

    /// k distinct indices from [0, n), in draw order. k must be <= n.
    std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k)
    {
        std::vector<std::size_t> pool(n);
        for (std::size_t i = 0; i < n; ++i)
            pool[i] = i;
        for (std::size_t i = 0; i < k; ++i)
            std::swap(pool[i], pool[i + below(n - i)]);
        pool.resize(k);
        return pool;
    }

private:
    std::mt19937_64 engine_;
};

/// Named sub-streams of a run seed; keeps sampling independent of evaluation order.
enum class Stream : std::uint64_t {
    instance_hints = 1,
    demo_selection = 2,
    demo_hints = 3,
    false_dictionary = 4,
    downsample = 5,
};

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t run_seed, Stream stream, std::uint64_t index = 0)
{
    return splitmix64(splitmix64(splitmix64(run_seed) ^ static_cast<std::uint64_t>(stream)) ^ index);
}

} // namespace dictprompt
