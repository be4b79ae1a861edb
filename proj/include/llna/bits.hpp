#pragma once

#include "error.hpp"

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace llna {

inline constexpr std::size_t words_for_bits(std::size_t n) noexcept { return (n + 63) / 64; }

/// Non-owning view of a packed binary sequence. Bit i lives in word i/64 at
/// position i%64. Bits past `size()` in the last word are always zero.
class BitView {
  public:
    BitView() = default;
    BitView(std::span<const std::uint64_t> words, std::size_t size) : words_(words), size_(size) {}

    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }
    std::span<const std::uint64_t> words() const noexcept { return words_; }

    bool operator[](std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }

    std::size_t count() const noexcept {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    std::string to_string() const {
        std::string s(size_, '0');
        for (std::size_t i = 0; i < size_; ++i)
            if ((*this)[i]) s[i] = '1';
        return s;
    }

    friend bool operator==(const BitView& a, const BitView& b) noexcept {
        if (a.size_ != b.size_) return false;
        for (std::size_t w = 0; w < a.words_.size(); ++w)
            if (a.words_[w] != b.words_[w]) return false;
        return true;
    }

  private:
    std::span<const std::uint64_t> words_;
    std::size_t size_ = 0;
};

/// Owning packed binary sequence.
class BitString {
  public:
    BitString() = default;
    explicit BitString(std::size_t n) : words_(words_for_bits(n), 0), size_(n) {}

    /// Parse a string of '0'/'1' characters.
    static BitString from_string(std::string_view text) {
        BitString b(text.size());
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (text[i] == '1') {
                b.set(i, true);
            } else if (text[i] != '0') {
                throw Error(ErrorKind::parse, "binary sequence may only contain '0' and '1'");
            }
        }
        return b;
    }

    std::size_t size() const noexcept { return size_; }
    bool operator[](std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }

    void set(std::size_t i, bool v) noexcept {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    void push_back(bool v) {
        if ((size_ & 63) == 0) words_.push_back(0);
        ++size_;
        set(size_ - 1, v);
    }

    BitView view() const noexcept { return {words_, size_}; }
    operator BitView() const noexcept { return view(); }  // NOLINT(google-explicit-constructor)

    std::string to_string() const { return view().to_string(); }
    std::span<std::uint64_t> words() noexcept { return words_; }

    friend bool operator==(const BitString& a, const BitString& b) noexcept { return a.view() == b.view(); }

  private:
    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
};

}  // namespace llna
