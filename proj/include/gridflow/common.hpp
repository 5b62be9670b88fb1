#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridflow {

using TokenId = int32_t;
using TokenList = std::vector<TokenId>;

// ---------------------------------------------------------------------------
// Seeding and portable random draws.
//
// All randomness flows from explicit 64-bit seeds. Distribution sampling is
// implemented from raw engine output so draws do not depend on the standard
// library's <random> distribution internals.
// ---------------------------------------------------------------------------

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a base seed and a stream label.
inline uint64_t derive_seed(uint64_t base, uint64_t stream) {
    return splitmix64(base ^ splitmix64(stream + 0x51f1a1c9d2e3b47ULL));
}

inline uint64_t derive_seed(uint64_t base, const std::string& label) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return derive_seed(base, h);
}

class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(splitmix64(seed ^ 0x2545f4914f6cdd1dULL)) {
        if (state_ == 0) state_ = 0x9e3779b97f4a7c15ULL;
    }

    uint64_t next_u64() {
        // xorshift64* : small, fast, reproducible everywhere.
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545f4914f6cdd1dULL;
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1].
    double uniform_open0() { return 1.0 - uniform(); }

    /// Uniform integer in [0, n).
    uint64_t uniform_int(uint64_t n) {
        if (n == 0) throw std::invalid_argument("uniform_int: n == 0");
        // Rejection sampling to remove modulo bias.
        uint64_t threshold = (0 - n) % n;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    int uniform_index(size_t n) { return static_cast<int>(uniform_int(static_cast<uint64_t>(n))); }

    bool bernoulli(double p) { return uniform() < p; }

    double normal() {
        // Box-Muller; consumes two uniforms per pair, caches the second.
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform_open0();
        double u2 = uniform();
        double mag = std::sqrt(-2.0 * std::log(u1));
        spare_ = mag * std::sin(6.283185307179586477 * u2);
        have_spare_ = true;
        return mag * std::cos(6.283185307179586477 * u2);
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = uniform_int(i);
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Counter-based uniform in [0,1): a pure function of (key, a, b). Used where
/// two likelihood evaluations must see identical corruption noise.
inline double counter_u01(uint64_t key, uint64_t a, uint64_t b) {
    uint64_t h = splitmix64(key ^ splitmix64(a * 0x9e3779b97f4a7c15ULL + 0x7f4a7c15ULL));
    h = splitmix64(h ^ splitmix64(b + 0x165667b19e3779f9ULL));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------
// Checksums (parameter freeze ledger, checkpoint manifests).
// ---------------------------------------------------------------------------

inline uint64_t fnv1a64(const void* data, size_t n, uint64_t h = 0xcbf29ce484222325ULL) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Error taxonomy: invalid user input vs broken internal state.
// ---------------------------------------------------------------------------

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct RuntimeFailure : std::runtime_error {
    explicit RuntimeFailure(const std::string& msg) : std::runtime_error(msg) {}
};

#define GRIDFLOW_CHECK(cond, msg)                                   \
    do {                                                            \
        if (!(cond)) throw ::gridflow::RuntimeFailure(msg);         \
    } while (0)

}  // namespace gridflow
