#include "cts/codec.hpp"

#include <cmath>
#include <cstring>
#include <memory>

#include "cts/coder.hpp"

namespace cts {

namespace {

const char kMagic[4] = {'C', 'T', 'S', '1'};

// the byte-oriented layout keeps one tree per within-byte bit position
// (indexed by the bits already seen of the current byte); the plain layouts
// drive a single tree.  all trees share one flat bit history and one arena.
struct Driver {
    ModelConfig cfg;
    NodeArena arena;
    std::vector<std::unique_ptr<ContextTree>> trees;
    BitHistory hist;
    int ctx = 1; // 1-based within-byte prefix index

    explicit Driver(const ModelConfig& c) : cfg(c), hist(c.depth) {
        size_t n = cfg.variant == Variant::CTS_STAR ? 255 : 1;
        trees.reserve(n);
        for (size_t i = 0; i < n; ++i)
            trees.emplace_back(new ContextTree(cfg, arena));
    }

    ContextTree& tree() { return *trees[trees.size() == 1 ? 0 : size_t(ctx - 1)]; }

    double probOne() { return tree().predictWith(hist, 1); }

    void observe(bit_t b) {
        tree().updateWith(hist, b);
        hist.push(b);
        if (trees.size() > 1) {
            ctx = ctx * 2 + b;
            if (ctx >= 256) ctx = 1; // byte boundary
        }
    }
};

void putU16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(uint8_t(v & 0xFF));
    out.push_back(uint8_t(v >> 8));
}

void putU64(std::vector<uint8_t>& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(uint8_t(v >> (8 * i)));
}

uint16_t getU16(const uint8_t* p) { return uint16_t(p[0] | (uint16_t(p[1]) << 8)); }

uint64_t getU64(const uint8_t* p) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= uint64_t(p[i]) << (8 * i);
    return v;
}

bool samePreset(const ModelConfig& a, const ModelConfig& b) {
    return a.variant == b.variant && a.count_scale == b.count_scale &&
           a.init_k == b.init_k && a.init_s == b.init_s;
}

ModelConfig presetFor(Variant v, int depth) {
    switch (v) {
    case Variant::CTW: return ModelConfig::ctw(depth);
    case Variant::CTS: return ModelConfig::cts(depth);
    case Variant::CTS_STAR: return ModelConfig::ctsStar(depth);
    }
    throw CodecError(CodecErrorKind::Unsupported, "unknown variant");
}

} // namespace

std::vector<uint8_t> compress(const std::vector<uint8_t>& input, const ModelConfig& config) {
    config.validate();
    if (!samePreset(config, presetFor(config.variant, config.depth)))
        throw std::invalid_argument("container carries preset parameter sets only");

    std::vector<uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 4);
    out.push_back(uint8_t(config.variant));
    putU16(out, uint16_t(config.depth));
    putU64(out, uint64_t(input.size()));
    if (input.empty()) return out;

    Driver d(config);
    ArithmeticEncoder enc;
    for (uint8_t byte : input) {
        for (int j = 7; j >= 0; --j) {
            bit_t b = (byte >> j) & 1;
            enc.encode(b, d.probOne());
            d.observe(b);
        }
    }
    enc.finish();
    out.insert(out.end(), enc.payload().begin(), enc.payload().end());
    return out;
}

std::vector<uint8_t> decompress(const std::vector<uint8_t>& input) {
    if (input.size() < 4 || std::memcmp(input.data(), kMagic, 4) != 0)
        throw CodecError(CodecErrorKind::BadMagic, "not a recognized container");
    if (input.size() < kHeaderSize)
        throw CodecError(CodecErrorKind::Truncated, "header cut short");

    uint8_t vb = input[4];
    if (vb > uint8_t(Variant::CTS_STAR))
        throw CodecError(CodecErrorKind::Unsupported, "unknown variant byte");
    int depth = int(getU16(input.data() + 5));
    if (depth > kMaxDepth)
        throw CodecError(CodecErrorKind::Unsupported, "depth beyond supported range");
    uint64_t length = getU64(input.data() + 7);

    std::vector<uint8_t> out;
    if (length == 0) return out;
    out.reserve(size_t(length));

    Driver d(presetFor(Variant(vb), depth));
    ArithmeticDecoder dec(input.data() + kHeaderSize, input.size() - kHeaderSize);
    for (uint64_t i = 0; i < length; ++i) {
        uint8_t byte = 0;
        for (int j = 7; j >= 0; --j) {
            bit_t b = dec.decode(d.probOne());
            d.observe(b);
            byte = uint8_t(byte | (uint8_t(b) << j));
        }
        out.push_back(byte);
    }
    // an intact payload never needs more than 32 invented zero bits; needing
    // more means the information for the tail bits was cut off
    if (dec.virtualBits() > 32)
        throw CodecError(CodecErrorKind::Truncated, "payload truncated");
    return out;
}

} // namespace cts
