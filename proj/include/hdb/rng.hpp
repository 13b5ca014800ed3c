#pragma once

#include "hdb/errors.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hdb::rng {

// Generator identity, recorded in output metadata. Stream derivation and the
// sampling procedures below are part of this version contract: changing any
// of them requires a new identifier.
inline constexpr std::string_view kGeneratorId = "philox4x32-10/streams-v1";

// ---------------------------------------------------------------------------
// Philox 4x32-10 counter-based block function
// ---------------------------------------------------------------------------

namespace philox {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

inline constexpr std::uint32_t kMul0 = 0xD2511F53u;
inline constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline Counter round(const Counter &c, const Key &k) {
    std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    auto lo0 = static_cast<std::uint32_t>(p0);
    auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

inline Counter block(Counter ctr, Key key) {
    ctr = round(ctr, key);
    for (int i = 1; i < 10; ++i) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
        ctr = round(ctr, key);
    }
    return ctr;
}

} // namespace philox

// ---------------------------------------------------------------------------
// Stream derivation
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// Substream id for one (master seed, country, scenario) triple. Streams are
// independent of execution order and thread placement by construction.
inline std::uint64_t derive_stream(std::uint64_t master_seed, std::string_view country_code,
                                   int scenario) {
    return splitmix64(splitmix64(master_seed) ^ fnv1a64(country_code) ^
                      static_cast<std::uint64_t>(scenario));
}

// ---------------------------------------------------------------------------
// Counter RNG
// ---------------------------------------------------------------------------

// One random stream addressed by (stream id, sequence). The sequence selects
// the Monte Carlo iteration, so any draw can be regenerated in isolation.
class CounterRng {
  public:
    CounterRng(std::uint64_t stream, std::uint64_t sequence)
        : key_{static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)},
          seq_lo_(static_cast<std::uint32_t>(sequence)),
          seq_hi_(static_cast<std::uint32_t>(sequence >> 32)) {}

    std::uint64_t next_u64() {
        if (avail_ == 0) refill();
        return buf_[2 - avail_--];
    }

    // Uniform in [0, 1), 53 bits of precision.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

  private:
    void refill() {
        philox::Counter ctr = {seq_lo_, seq_hi_, static_cast<std::uint32_t>(block_),
                               static_cast<std::uint32_t>(block_ >> 32)};
        ++block_;
        philox::Counter out = philox::block(ctr, key_);
        buf_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
        buf_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
        avail_ = 2;
    }

    philox::Key key_;
    std::uint32_t seq_lo_, seq_hi_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buf_{};
    int avail_ = 0;
};

// ---------------------------------------------------------------------------
// Sampling without replacement
// ---------------------------------------------------------------------------

// Sequential weighted sampling: each step draws one remaining index with
// probability weight / (sum of remaining weights). Returns k distinct indices
// in draw order.
inline std::vector<std::size_t> sample_weighted_without_replacement(
    std::span<const double> weights, std::size_t k, CounterRng &rng) {
    if (k > weights.size()) throw Error("sample size exceeds population");
    std::vector<std::size_t> alive(weights.size());
    for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = i;
    std::vector<std::size_t> picked;
    picked.reserve(k);
    for (std::size_t step = 0; step < k; ++step) {
        double total = 0.0;
        for (std::size_t idx : alive) total += weights[idx];
        if (!(total > 0.0)) throw AllZeroWeightsError("(candidates)");
        double r = rng.next_double() * total;
        std::size_t chosen = alive.size() - 1;
        double cum = 0.0;
        for (std::size_t j = 0; j < alive.size(); ++j) {
            cum += weights[alive[j]];
            if (r < cum) {
                chosen = j;
                break;
            }
        }
        picked.push_back(alive[chosen]);
        alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(chosen));
    }
    return picked;
}

// Uniform sampling without replacement via index draws over the remaining
// population. Kept separate from the weighted path so the two can be checked
// against each other.
inline std::vector<std::size_t> sample_uniform_without_replacement(std::size_t n, std::size_t k,
                                                                   CounterRng &rng) {
    if (k > n) throw Error("sample size exceeds population");
    std::vector<std::size_t> alive(n);
    for (std::size_t i = 0; i < n; ++i) alive[i] = i;
    std::vector<std::size_t> picked;
    picked.reserve(k);
    for (std::size_t step = 0; step < k; ++step) {
        auto j = static_cast<std::size_t>(rng.next_double() *
                                          static_cast<double>(alive.size()));
        if (j >= alive.size()) j = alive.size() - 1;
        picked.push_back(alive[j]);
        alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(j));
    }
    return picked;
}

} // namespace hdb::rng
