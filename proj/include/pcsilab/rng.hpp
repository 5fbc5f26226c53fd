#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pcsilab/rational.hpp"

namespace pcsilab {

/// splitmix64 stream. Fixed, portable generator so every transcript replays
/// identically regardless of platform or standard library.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Source of protocol randomness. Every random choice a scheme makes goes
/// through uniform(n), an exact uniform draw on [0, n). Keeping the draws
/// atomic and their domains explicit is what lets the auditor enumerate the
/// full coin space of a query.
class RandomSource {
public:
    virtual ~RandomSource() = default;
    virtual std::uint64_t uniform(std::uint64_t n) = 0;
};

/// Seeded source for protocol runs; unbiased via rejection on the raw
/// 64-bit stream.
class SeededSource final : public RandomSource {
public:
    explicit SeededSource(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t uniform(std::uint64_t n) override {
        if (n == 0) throw std::invalid_argument("uniform(0)");
        if (n == 1) return 0;
        const std::uint64_t lim = UINT64_MAX - UINT64_MAX % n;  // multiple of n
        std::uint64_t r;
        do { r = gen_.next(); } while (r >= lim);
        return r % n;
    }

private:
    SplitMix64 gen_;
};

/// Depth-first odometer over a coin tree. One pass replays a recorded prefix
/// and appends zeros for fresh draws; advance() moves to the next leaf.
/// Domain sizes may depend on earlier draws, so this walks a tree, not a grid.
class TapeSource final : public RandomSource {
public:
    std::uint64_t uniform(std::uint64_t n) override {
        if (n == 0) throw std::invalid_argument("uniform(0)");
        if (pos_ == tape_.size()) {
            tape_.emplace_back(0, n);
        } else if (tape_[pos_].second != n) {
            throw std::logic_error("TapeSource: domain changed along a fixed prefix");
        }
        return tape_[pos_++].first;
    }

    /// Start the next replay from the beginning of the tape.
    void rewind() { pos_ = 0; }

    /// Move to the next leaf; false once the whole tree has been visited.
    bool advance() {
        while (!tape_.empty()) {
            if (tape_.back().first + 1 < tape_.back().second) {
                ++tape_.back().first;
                return true;
            }
            tape_.pop_back();
        }
        return false;
    }

    /// Probability of the leaf just replayed (product of 1/domain).
    Rational leaf_probability() const {
        Rational p(1);
        for (const auto& [v, n] : tape_) p = p * Rational(1, static_cast<std::int64_t>(n));
        return p;
    }

private:
    std::vector<std::pair<std::uint64_t, std::uint64_t>> tape_;
    std::size_t pos_ = 0;
};

}  // namespace pcsilab
