#include "siht/random.hpp"

#include <cmath>
#include <array>
#include <cstddef>

namespace siht {

namespace {
__extension__ typedef unsigned __int128 uint128;

constexpr std::size_t zig_layers = 128;
constexpr double zig_r = 3.442619855899;
constexpr double zig_v = 9.91256303526217e-3;

struct Ziggurat {
    std::array<double, zig_layers + 1> x{};
    std::array<double, zig_layers> ratio{};
};

const Ziggurat& ziggurat()
{
    static const Ziggurat table = [] {
        Ziggurat z;
        double f = std::exp(-0.5 * zig_r * zig_r);
        z.x[0] = zig_v / f;
        z.x[1] = zig_r;
        z.x[zig_layers] = 0.0;
        for (std::size_t i = 2; i < zig_layers; ++i) {
            z.x[i] = std::sqrt(-2.0 * std::log(zig_v / z.x[i - 1] + f));
            f = std::exp(-0.5 * z.x[i] * z.x[i]);
        }
        for (std::size_t i = 0; i < zig_layers; ++i)
            z.ratio[i] = z.x[i + 1] / z.x[i];
        return z;
    }();
    return table;
}

}  // namespace

std::uint64_t Stream::below(std::uint64_t n) noexcept
{
    if (n <= 1)
        return 0;
    uint128 m = static_cast<uint128>(next_u64()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
        const std::uint64_t threshold = (0 - n) % n;
        while (low < threshold) {
            m = static_cast<uint128>(next_u64()) * n;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

double Stream::normal() noexcept
{
    // Ziggurat with 128 layers (Doornik's ZIGNOR layout). One 64-bit draw
    // supplies both the layer (low 7 bits) and the abscissa (top 53 bits).
    const Ziggurat& z = ziggurat();
    for (;;) {
        const std::uint64_t bits = next_u64();
        const std::size_t i = bits & 0x7f;
        const double u = 2.0 * (static_cast<double>(bits >> 11) * 0x1.0p-53) - 1.0;
        if (std::abs(u) < z.ratio[i])
            return u * z.x[i];
        if (i == 0)
            return normal_tail(u < 0.0);
        const double x = u * z.x[i];
        const double f0 = std::exp(-0.5 * (z.x[i] * z.x[i] - x * x));
        const double f1 = std::exp(-0.5 * (z.x[i + 1] * z.x[i + 1] - x * x));
        if (f1 + uniform() * (f0 - f1) < 1.0)
            return x;
    }
}

double Stream::normal_tail(bool negative) noexcept
{
    double x = 0.0;
    double y = 0.0;
    do {
        x = std::log(1.0 - uniform()) / zig_r;
        y = std::log(1.0 - uniform());
    } while (-2.0 * y < x * x);
    return negative ? x - zig_r : zig_r - x;
}

}  // namespace siht
