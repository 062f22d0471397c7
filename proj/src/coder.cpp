#include "cts/coder.hpp"

namespace cts {

namespace {

constexpr uint32_t kHalf = 0x80000000u;
constexpr uint32_t kQuarter = 0x40000000u;

// size of the zero branch of [low, high]; both coder sides call this with
// identical arguments, which is what keeps them in lockstep
uint64_t zeroRange(uint32_t low, uint32_t high, double p_one) {
    double p0 = 1.0 - clampProbability(p_one);
    uint64_t range = uint64_t(high) - low + 1;
    uint64_t r0 = uint64_t(double(range) * p0);
    if (r0 < 1) r0 = 1;
    if (r0 > range - 1) r0 = range - 1;
    return r0;
}

} // namespace

double clampProbability(double p) {
    if (!(p > kProbFloor)) return kProbFloor;
    if (p > 1.0 - kProbFloor) return 1.0 - kProbFloor;
    return p;
}

void ArithmeticEncoder::emit(bit_t b) {
    m_out.put(b);
    for (; m_pending > 0; --m_pending) m_out.put(!b);
}

void ArithmeticEncoder::encode(bit_t bit, double p_one) {
    uint64_t r0 = zeroRange(m_low, m_high, p_one);
    if (bit == 0)
        m_high = uint32_t(m_low + r0 - 1);
    else
        m_low = uint32_t(m_low + r0);

    while (true) {
        if (m_high < kHalf) {
            emit(0);
        } else if (m_low >= kHalf) {
            emit(1);
            m_low -= kHalf;
            m_high -= kHalf;
        } else if (m_low >= kQuarter && m_high < kHalf + kQuarter) {
            ++m_pending;
            m_low -= kQuarter;
            m_high -= kQuarter;
        } else {
            break;
        }
        m_low <<= 1;
        m_high = (m_high << 1) | 1;
    }
}

void ArithmeticEncoder::finish() {
    if (m_finished) return;
    m_finished = true;
    // after renormalization low < 1/2 <= high, so the number 0.1000... lies
    // inside the final range; one bit selects it.  when the range is narrower
    // than half the unit square that single bit alone would fall short of the
    // information content, so a second one pins the value down.
    uint64_t width = uint64_t(m_high) - m_low + 1;
    emit(1);
    if (width < uint64_t(kHalf)) emit(0);
    m_out.finish();
}

ArithmeticDecoder::ArithmeticDecoder(const uint8_t* data, size_t size) : m_in(data, size) {
    for (int i = 0; i < 32; ++i) m_value = (m_value << 1) | uint32_t(m_in.next());
}

bit_t ArithmeticDecoder::decode(double p_one) {
    uint64_t r0 = zeroRange(m_low, m_high, p_one);
    bit_t bit = uint64_t(m_value) - m_low >= r0 ? 1 : 0;
    if (bit == 0)
        m_high = uint32_t(m_low + r0 - 1);
    else
        m_low = uint32_t(m_low + r0);

    while (true) {
        if (m_high < kHalf) {
            // nothing to subtract
        } else if (m_low >= kHalf) {
            m_low -= kHalf;
            m_high -= kHalf;
            m_value -= kHalf;
        } else if (m_low >= kQuarter && m_high < kHalf + kQuarter) {
            m_low -= kQuarter;
            m_high -= kQuarter;
            m_value -= kQuarter;
        } else {
            break;
        }
        m_low <<= 1;
        m_high = (m_high << 1) | 1;
        m_value = (m_value << 1) | uint32_t(m_in.next());
    }
    return bit;
}

} // namespace cts
