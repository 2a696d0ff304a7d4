#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "csplab/errors.hpp"

namespace csplab {

// A bit string with an exact bit length. Streaming states are measured and
// compared in this form; unused bits of the last byte are kept zero so that
// equality is plain byte equality.
class BitString {
public:
    BitString() = default;

    std::uint64_t size_bits() const { return nbits_; }
    bool empty() const { return nbits_ == 0; }

    void append_bit(bool b) {
        if (nbits_ % 8 == 0) bytes_.push_back(0);
        if (b) bytes_.back() |= static_cast<std::uint8_t>(1u << (nbits_ % 8));
        ++nbits_;
    }

    // Append `width` bits of v, least significant first. width <= 64.
    void append(std::uint64_t v, unsigned width) {
        for (unsigned i = 0; i < width; ++i) append_bit((v >> i) & 1u);
    }

    bool bit(std::uint64_t pos) const {
        return (bytes_[pos / 8] >> (pos % 8)) & 1u;
    }

    std::uint64_t read(std::uint64_t pos, unsigned width) const {
        std::uint64_t v = 0;
        for (unsigned i = 0; i < width; ++i)
            if (bit(pos + i)) v |= (1ULL << i);
        return v;
    }

    friend bool operator==(const BitString& a, const BitString& b) {
        return a.nbits_ == b.nbits_ && a.bytes_ == b.bytes_;
    }
    friend bool operator!=(const BitString& a, const BitString& b) { return !(a == b); }

    std::string hex() const {
        static const char* d = "0123456789abcdef";
        std::string s;
        s.reserve(bytes_.size() * 2);
        for (std::uint8_t b : bytes_) {
            s.push_back(d[b >> 4]);
            s.push_back(d[b & 0xf]);
        }
        return s;
    }

private:
    std::vector<std::uint8_t> bytes_;
    std::uint64_t nbits_ = 0;
};

// Sequential reader over a BitString.
class BitReader {
public:
    explicit BitReader(const BitString& bs) : bs_(bs) {}

    std::uint64_t read(unsigned width) {
        if (pos_ + width > bs_.size_bits())
            throw ShapeError("BitReader: read past end of state");
        std::uint64_t v = bs_.read(pos_, width);
        pos_ += width;
        return v;
    }

    bool read_bit() { return read(1) != 0; }
    std::uint64_t position() const { return pos_; }

private:
    const BitString& bs_;
    std::uint64_t pos_ = 0;
};

// Width in bits of the smallest field holding values 0..top inclusive.
inline unsigned bits_for(std::uint64_t top) {
    unsigned w = 1;
    while ((top >> w) != 0) ++w;
    return w;
}

} // namespace csplab
