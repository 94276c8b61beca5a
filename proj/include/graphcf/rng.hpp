#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace graphcf {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// mt19937_64 with hand-rolled draw helpers so that generated streams do not
// depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // [0, 1)
    double uniform01() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // inclusive bounds, rejection-sampled so every value is equally likely
    int uniform_int(int lo, int hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t draw;
        do {
            draw = next();
        } while (draw >= limit);
        return lo + static_cast<int>(draw % span);
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // number of failures before the first success, p in (0, 1]
    int geometric(double p) {
        if (p >= 1.0) return 0;
        const double u = uniform01();
        return static_cast<int>(std::floor(std::log1p(-u) / std::log1p(-p)));
    }

    template <class T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(
                uniform_int(0, static_cast<int>(i) - 1));
            std::swap(items[i - 1], items[j]);
        }
    }

    // independent child stream, stable under reordering of sibling streams
    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
        return splitmix64(splitmix64(seed) ^ splitmix64(salt));
    }

    static Rng child(std::uint64_t seed, std::uint64_t salt) {
        return Rng(derive_seed(seed, salt));
    }

private:
    std::mt19937_64 gen_;
};

} // namespace graphcf
