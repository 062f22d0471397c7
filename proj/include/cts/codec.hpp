// whole-buffer compression with a small self-describing container.
// layout: magic "CTS1", one variant byte, little-endian u16 context depth,
// little-endian u64 original byte length, then the arithmetic payload.
// the header pins everything a decoder needs, so only the preset parameter
// set of each variant can be carried.

#ifndef __CTS_CODEC_HPP__
#define __CTS_CODEC_HPP__

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cts/model.hpp"

namespace cts {

constexpr size_t kHeaderSize = 15;

enum class CodecErrorKind {
    BadMagic,    // not one of our containers
    Unsupported, // unknown variant byte or out-of-range depth
    Truncated    // payload ends before the data it must supply
};

class CodecError : public std::runtime_error {
  public:
    CodecError(CodecErrorKind kind, const std::string& what)
        : std::runtime_error(what), m_kind(kind) {}
    CodecErrorKind kind() const { return m_kind; }

  private:
    CodecErrorKind m_kind;
};

// config must be one of the ModelConfig presets (the container does not
// record free parameters); throws std::invalid_argument otherwise
std::vector<uint8_t> compress(const std::vector<uint8_t>& input, const ModelConfig& config);

// throws CodecError on a malformed container
std::vector<uint8_t> decompress(const std::vector<uint8_t>& input);

} // namespace cts

#endif
