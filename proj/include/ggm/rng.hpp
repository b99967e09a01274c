#pragma once

#include <cstdint>
#include <random>

namespace ggm {

/// Portable seeded generator.
///
/// Raw bits come from std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. The standard distributions are implementation-defined, so
/// uniforms, bounded integers and normals are derived here:
///   uniform()      53 high bits scaled to [0, 1)
///   below(n)       rejection sampling on the top bits (unbiased)
///   normal()       Marsaglia polar method, second variate cached
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bits() { return engine_(); }
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::uint64_t below(std::uint64_t n);
    double normal();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// SplitMix64 finalizer; mixes structured seed tuples into independent streams.
std::uint64_t mix_seed(std::uint64_t x);

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
    std::uint64_t h = mix_seed(base);
    h = mix_seed(h ^ (a + 0x9e3779b97f4a7c15ULL));
    h = mix_seed(h ^ (b + 0xbf58476d1ce4e5b9ULL));
    h = mix_seed(h ^ (c + 0x94d049bb133111ebULL));
    return h;
}

}  // namespace ggm
