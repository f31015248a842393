#include "qsdc/random_stream.hpp"

namespace qsdc {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RandomStream RandomStream::derive(std::uint64_t master_seed, std::uint64_t counter) {
    return RandomStream(splitmix64(master_seed ^ splitmix64(counter)));
}

std::uint64_t RandomStream::below(std::uint64_t n) {
    // Rejection sampling keeps the result unbiased for any n.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v = engine_();
    while (v >= limit) {
        v = engine_();
    }
    return v % n;
}

} // namespace qsdc
