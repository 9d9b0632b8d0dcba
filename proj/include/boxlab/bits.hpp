#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace boxlab {

// Fixed-length bit vector used for {0,1}-valued representations and fingerprints.
// Ordering is lexicographic by ascending bit index (bit 0 is the leading symbol),
// which coincides with lexicographic order of the corresponding 0/1 sequences.
class Bits {
 public:
  Bits() = default;
  explicit Bits(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const noexcept { return size_; }

  bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) noexcept { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
  void clear() noexcept {
    for (auto& w : words_) w = 0;
  }

  Bits& operator^=(const Bits& o) noexcept {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
    return *this;
  }
  Bits& operator|=(const Bits& o) noexcept {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
    return *this;
  }
  Bits& operator&=(const Bits& o) noexcept {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= o.words_[w];
    return *this;
  }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool none() const noexcept {
    for (auto w : words_)
      if (w) return false;
    return true;
  }
  bool intersects(const Bits& o) const noexcept {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & o.words_[w]) return true;
    return false;
  }
  bool is_subset_of(const Bits& o) const noexcept {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & ~o.words_[w]) return false;
    return true;
  }

  template <class F>
  void for_each_set(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t word = words_[w];
      while (word) {
        const int b = std::countr_zero(word);
        f(w * 64 + static_cast<std::size_t>(b));
        word &= word - 1;
      }
    }
  }

  std::vector<std::size_t> positions() const {
    std::vector<std::size_t> out;
    for_each_set([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> mutable_words() noexcept { return words_; }

  std::size_t hash() const noexcept {
    std::size_t h = size_;
    for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    return h;
  }

  friend bool operator==(const Bits& a, const Bits& b) noexcept {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }

  friend bool operator<(const Bits& a, const Bits& b) noexcept {
    for (std::size_t w = 0; w < a.words_.size(); ++w) {
      const std::uint64_t d = a.words_[w] ^ b.words_[w];
      if (d) return ((a.words_[w] >> std::countr_zero(d)) & 1U) == 0;
    }
    return false;
  }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct BitsHash {
  std::size_t operator()(const Bits& b) const noexcept { return b.hash(); }
};

}  // namespace boxlab
