#pragma once

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace atmas {

using Bytes = std::vector<uint8_t>;

inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

inline std::string to_hex(const Bytes& data) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

inline Bytes from_hex(std::string_view hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("from_hex: bad hex digit");
    };
    if (hex.size() % 2 != 0) throw std::invalid_argument("from_hex: odd length");
    Bytes out(hex.size() / 2);
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
    return out;
}

// Length-prefixed binary codec used for message canonicalization. All
// integers big-endian so encodings are platform independent.
class ByteWriter {
public:
    void put_u8(uint8_t v) { buf_.push_back(v); }
    void put_u32(uint32_t v) {
        for (int i = 3; i >= 0; --i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void put_u64(uint64_t v) {
        for (int i = 7; i >= 0; --i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void put_i64(int64_t v) { put_u64(static_cast<uint64_t>(v)); }
    void put_f64(double v) {
        uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        put_u64(bits);
    }
    void put_bytes(const Bytes& b) {
        put_u32(static_cast<uint32_t>(b.size()));
        buf_.insert(buf_.end(), b.begin(), b.end());
    }
    void put_string(std::string_view s) {
        put_u32(static_cast<uint32_t>(s.size()));
        buf_.insert(buf_.end(), s.begin(), s.end());
    }
    const Bytes& data() const { return buf_; }
    Bytes take() { return std::move(buf_); }

private:
    Bytes buf_;
};

class ByteReader {
public:
    explicit ByteReader(const Bytes& data) : data_(data) {}

    uint8_t get_u8() {
        need(1);
        return data_[pos_++];
    }
    uint32_t get_u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = v << 8 | data_[pos_++];
        return v;
    }
    uint64_t get_u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = v << 8 | data_[pos_++];
        return v;
    }
    int64_t get_i64() { return static_cast<int64_t>(get_u64()); }
    double get_f64() {
        uint64_t bits = get_u64();
        double v;
        std::memcpy(&v, &bits, sizeof(v));
        return v;
    }
    Bytes get_bytes() {
        uint32_t n = get_u32();
        need(n);
        Bytes out(data_.begin() + pos_, data_.begin() + pos_ + n);
        pos_ += n;
        return out;
    }
    std::string get_string() {
        Bytes b = get_bytes();
        return std::string(b.begin(), b.end());
    }
    bool at_end() const { return pos_ == data_.size(); }

private:
    void need(size_t n) {
        if (pos_ + n > data_.size()) throw std::out_of_range("ByteReader: truncated input");
    }
    const Bytes& data_;
    size_t pos_ = 0;
};

}  // namespace atmas
