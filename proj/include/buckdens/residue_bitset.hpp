#pragma once

#include <atomic>
#include <bit>
#include <cstdint>
#include <vector>

#include "buckdens/core.hpp"

namespace buckdens {

/// Fixed-size bit vector indexed by residues 0..size-1.
class ResidueBitset {
public:
    ResidueBitset() = default;
    explicit ResidueBitset(Natural size, bool value = false)
        : size_(size), words_((size + 63) / 64, value ? ~std::uint64_t{0} : 0) {
        trim();
    }

    Natural size() const noexcept { return size_; }

    bool test(Natural i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(Natural i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(Natural i) noexcept { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    /// Safe when several threads set bits in the same word.
    void set_atomic(Natural i) noexcept {
        std::atomic_ref<std::uint64_t>(words_[i >> 6]).fetch_or(std::uint64_t{1} << (i & 63),
                                                                std::memory_order_relaxed);
    }

    Natural count() const noexcept {
        Natural c = 0;
        for (auto w : words_) c += static_cast<Natural>(std::popcount(w));
        return c;
    }
    bool none() const noexcept {
        for (auto w : words_)
            if (w) return false;
        return true;
    }
    bool all() const noexcept { return count() == size_; }

    void flip() noexcept {
        for (auto& w : words_) w = ~w;
        trim();
    }

    ResidueBitset& operator|=(const ResidueBitset& o) noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    ResidueBitset& operator&=(const ResidueBitset& o) noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }

    /// First set index at or after `from`, or size() when there is none.
    Natural find_next(Natural from) const noexcept {
        if (from >= size_) return size_;
        std::size_t wi = from >> 6;
        std::uint64_t w = words_[wi] & (~std::uint64_t{0} << (from & 63));
        while (true) {
            if (w) return (static_cast<Natural>(wi) << 6) + static_cast<Natural>(std::countr_zero(w));
            if (++wi >= words_.size()) return size_;
            w = words_[wi];
        }
    }

    template <class F>
    void for_each_set(F&& f) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w) {
                f((static_cast<Natural>(wi) << 6) + static_cast<Natural>(std::countr_zero(w)));
                w &= w - 1;
            }
        }
    }

    std::vector<Natural> to_vector() const {
        std::vector<Natural> out;
        for_each_set([&](Natural i) { out.push_back(i); });
        return out;
    }

    friend bool operator==(const ResidueBitset&, const ResidueBitset&) = default;

private:
    void trim() noexcept {
        if (size_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
    }

    Natural size_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace buckdens
