#pragma once

#include <bit>
#include <cstdint>
#include <string>

#include "riskscout/errors.hpp"
#include "riskscout/rng.hpp"

namespace riskscout {

// Fixed-width bitstring backed by a single word. Bit 0 is the first character
// of the string form. Width is capped at 63 so the word doubles as a set key.
class BitVector {
public:
    BitVector() = default;

    BitVector(uint64_t bits, int width) : bits_(bits), width_(width) {
        if (width < 1 || width > 63)
            fail(Errc::WidthTooSmall, "bit width must be in [1, 63], got " + std::to_string(width));
        if (width < 63 && (bits >> width) != 0)
            fail(Errc::ValueOutOfRange, "bits exceed declared width " + std::to_string(width));
    }

    static BitVector zeros(int width) { return BitVector(0, width); }

    static BitVector from_string(const std::string& s) {
        if (s.empty() || s.size() > 63)
            fail(Errc::WidthTooSmall, "bitstring length must be in [1, 63]");
        uint64_t bits = 0;
        for (size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1')
                bits |= uint64_t{1} << i;
            else if (s[i] != '0')
                fail(Errc::ValueOutOfRange, "bitstring may contain only '0' and '1'");
        }
        return BitVector(bits, static_cast<int>(s.size()));
    }

    static BitVector random(int width, Rng& rng) {
        BitVector z = zeros(width);
        for (int i = 0; i < width; ++i)
            if (rng.bernoulli(0.5)) z.set(i, true);
        return z;
    }

    int size() const { return width_; }
    uint64_t word() const { return bits_; }

    bool get(int i) const { return (bits_ >> i) & 1; }

    void set(int i, bool v) {
        if (v)
            bits_ |= uint64_t{1} << i;
        else
            bits_ &= ~(uint64_t{1} << i);
    }

    void flip(int i) { bits_ ^= uint64_t{1} << i; }

    int popcount() const { return std::popcount(bits_); }

    int hamming(const BitVector& o) const { return std::popcount(bits_ ^ o.bits_); }

    std::string to_string() const {
        std::string s(static_cast<size_t>(width_), '0');
        for (int i = 0; i < width_; ++i)
            if (get(i)) s[static_cast<size_t>(i)] = '1';
        return s;
    }

    // Field access: feature fields store their value MSB-first at [offset, offset+bits).
    uint64_t read_field(int offset, int bits) const {
        uint64_t v = 0;
        for (int i = 0; i < bits; ++i)
            v = (v << 1) | static_cast<uint64_t>(get(offset + i));
        return v;
    }

    void write_field(int offset, int bits, uint64_t value) {
        for (int i = 0; i < bits; ++i)
            set(offset + i, (value >> (bits - 1 - i)) & 1);
    }

    friend bool operator==(const BitVector& a, const BitVector& b) {
        return a.width_ == b.width_ && a.bits_ == b.bits_;
    }
    friend bool operator!=(const BitVector& a, const BitVector& b) { return !(a == b); }
    friend bool operator<(const BitVector& a, const BitVector& b) {
        return a.bits_ != b.bits_ ? a.bits_ < b.bits_ : a.width_ < b.width_;
    }

private:
    uint64_t bits_ = 0;
    int width_ = 0;
};

} // namespace riskscout
