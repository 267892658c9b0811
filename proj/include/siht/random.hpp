#ifndef SIHT_RANDOM_HPP
#define SIHT_RANDOM_HPP

#include <cstdint>
#include <initializer_list>

namespace siht {

// 64-bit finalizer from SplitMix64.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Folds an ordered tuple of words into one stream key. Used to derive
// per-trial / per-phase seeds as hash(master_seed, tag, ...), so that any
// sub-stream can be regenerated without replaying the others.
constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> words) noexcept
{
    std::uint64_t h = 0x6a09e667f3bcc908ULL;
    for (std::uint64_t w : words)
        h = mix64(h ^ mix64(w + 0x9e3779b97f4a7c15ULL));
    return h;
}

// Counter-based generator: draw i of a stream is mix64(key + i * gamma).
// Output depends only on (key, counter), never on the standard library's
// distribution implementations, so sequences are portable.
class Stream {
public:
    explicit Stream(std::uint64_t key) noexcept : key_(mix64(key)) {}

    std::uint64_t next_u64() noexcept
    {
        return mix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL);
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on {0, ..., n-1}; unbiased (Lemire's multiply-and-reject).
    std::uint64_t below(std::uint64_t n) noexcept;

    // Standard normal (ziggurat).
    double normal() noexcept;

    // +1 or -1 with equal probability.
    double sign() noexcept { return (next_u64() >> 63) ? 1.0 : -1.0; }

    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;

    double normal_tail(bool negative) noexcept;
};

}  // namespace siht

#endif  // SIHT_RANDOM_HPP
