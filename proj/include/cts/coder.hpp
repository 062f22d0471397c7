// binary arithmetic coder over an inclusive 32-bit range, with carry
// handling by pending-bit counting.  the range split is computed by one
// shared routine so the encoder and decoder walk identical trajectories;
// model probabilities are clamped away from 0 and 1 before use.

#ifndef __CTS_CODER_HPP__
#define __CTS_CODER_HPP__

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cts/kt.hpp"

namespace cts {

// smallest conditional probability the coder will represent
constexpr double kProbFloor = 1.0 / double(1 << 20);

double clampProbability(double p);

// MSB-first bit sink; finish() pads the last byte with zeros but the bit
// count keeps the unpadded length
class BitWriter {
  public:
    void put(bit_t b) {
        if (b) m_cur |= uint8_t(0x80u >> m_fill);
        if (++m_fill == 8) {
            m_bytes.push_back(m_cur);
            m_cur = 0;
            m_fill = 0;
        }
        ++m_count;
    }
    void finish() {
        if (m_fill > 0) {
            m_bytes.push_back(m_cur);
            m_cur = 0;
            m_fill = 0;
        }
    }
    uint64_t bitCount() const { return m_count; }
    const std::vector<uint8_t>& bytes() const { return m_bytes; }

  private:
    std::vector<uint8_t> m_bytes;
    uint64_t m_count = 0;
    uint8_t m_cur = 0;
    int m_fill = 0;
};

// MSB-first bit source; reads past the end yield zeros and are counted, so
// the caller can tell an exhausted stream from a truncated one
class BitReader {
  public:
    BitReader(const uint8_t* data, size_t size) : m_data(data), m_size(size) {}
    bit_t next() {
        size_t byte = m_pos >> 3;
        if (byte >= m_size) {
            ++m_virtual;
            return 0;
        }
        bit_t b = (m_data[byte] >> (7 - (m_pos & 7))) & 1;
        ++m_pos;
        return b;
    }
    uint64_t virtualBits() const { return m_virtual; }

  private:
    const uint8_t* m_data;
    size_t m_size;
    size_t m_pos = 0;
    uint64_t m_virtual = 0;
};

class ArithmeticEncoder {
  public:
    void encode(bit_t bit, double p_one);

    // close the stream: one disambiguation bit (plus a second when the final
    // range is narrow), then zero padding to a byte boundary.  the unpadded
    // payload length never exceeds the information content by more than one
    // bit.
    void finish();

    const std::vector<uint8_t>& payload() const { return m_out.bytes(); }
    uint64_t payloadBits() const { return m_out.bitCount(); }
    uint32_t low() const { return m_low; }
    uint32_t high() const { return m_high; }

  private:
    void emit(bit_t b);

    BitWriter m_out;
    uint32_t m_low = 0;
    uint32_t m_high = 0xFFFFFFFFu;
    uint64_t m_pending = 0;
    bool m_finished = false;
};

class ArithmeticDecoder {
  public:
    ArithmeticDecoder(const uint8_t* data, size_t size);
    bit_t decode(double p_one);

    // zero bits invented past the end of the payload; an intact stream never
    // needs more than 32 of them
    uint64_t virtualBits() const { return m_in.virtualBits(); }
    uint32_t low() const { return m_low; }
    uint32_t high() const { return m_high; }

  private:
    BitReader m_in;
    uint32_t m_low = 0;
    uint32_t m_high = 0xFFFFFFFFu;
    uint32_t m_value = 0;
};

} // namespace cts

#endif
