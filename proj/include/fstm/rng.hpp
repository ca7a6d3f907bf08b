#pragma once

#include <cstdint>
#include <vector>

namespace fstm {

// Seedable generator with self-contained bounded-int / real draws so that
// datasets are reproducible independent of the standard library's
// distribution implementations.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    uint64_t next() {
        // splitmix64
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n), n >= 1.
    uint64_t below(uint64_t n) {
        uint64_t bound = ~uint64_t(0) - (~uint64_t(0) % n);
        uint64_t v;
        do {
            v = next();
        } while (v >= bound);
        return v % n;
    }

    size_t index(size_t n) { return static_cast<size_t>(below(n)); }

    double real() { return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0); }

    bool chance(double p) { return real() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[index(i)]);
    }

    // Stable derived seed for sub-streams (batches, samples).
    static uint64_t derive(uint64_t seed, uint64_t stream) {
        Rng r(seed ^ (0xd1342543de82ef95ULL * (stream + 1)));
        return r.next();
    }

private:
    uint64_t state_;
};

} // namespace fstm
