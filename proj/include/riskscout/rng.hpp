#pragma once

#include <cstdint>
#include <cmath>
#include <string_view>

namespace riskscout {

// splitmix64 finalizer; the basis of every stream in the project.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t hash_combine(uint64_t a, uint64_t b) {
    return mix64(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

inline uint64_t hash3(uint64_t a, uint64_t b, uint64_t c) {
    return hash_combine(hash_combine(a, b), c);
}

inline uint64_t hash_str(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Substream labels. Derivation is pure arithmetic on the master seed, so any
// stream can be reconstructed without replaying the run.
enum class Stream : uint64_t {
    Proposal = 1,
    Render = 2,
    Shots = 3,
    Init = 4,
    Split = 5,
    Tree = 6,
};

inline uint64_t derive_stream(uint64_t master, uint64_t scope, Stream s) {
    return hash3(master, scope, static_cast<uint64_t>(s));
}

// Counter-based PRNG: state advances by the splitmix64 gamma, output is the
// finalizer. Deterministic on every platform, unlike std:: distributions.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    // [0, n), n > 0
    uint64_t uniform_int(uint64_t n) {
        return static_cast<uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Box-Muller, one value per call (no cached pair: keeps replay trivial).
    double normal() {
        double u1 = 1.0 - uniform(); // (0, 1]
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

private:
    uint64_t state_;
};

} // namespace riskscout
