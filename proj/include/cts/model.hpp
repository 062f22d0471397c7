// context-tree models over binary streams: one node arena with path
// compression, plus the per-variant mixture updates (tree weighting and tree
// switching, the latter optionally with decayed counts and asymmetric fresh
// weights).  trees are driven bit by bit; the context is the most recent
// history bit first.

#ifndef __CTS_MODEL_HPP__
#define __CTS_MODEL_HPP__

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "cts/kt.hpp"

namespace cts {

enum class Variant : uint8_t { CTW = 0, CTS = 1, CTS_STAR = 2 };

const char* variantName(Variant v);

// model depth is capped by the context bits a sprout record can hold
constexpr int kMaxDepth = 256;

struct ModelConfig {
    Variant variant = Variant::CTS;
    int depth = 48;
    double count_scale = 1.0; // geometric decay applied to estimator counts
    double init_k = 0.5;      // fresh-node weight on the node's own estimator
    double init_s = 0.5;      // fresh-node weight on the children side

    static ModelConfig ctw(int depth);
    static ModelConfig cts(int depth);
    static ModelConfig ctsStar(int depth);

    // throws std::invalid_argument when out of range
    void validate() const;
};

// ring buffer over recent bits, most recent first; positions before the
// first push read as zero (the padded initial context)
class BitHistory {
  public:
    explicit BitHistory(int capacity);
    void push(bit_t b) {
        m_bits[m_pos & m_mask] = uint8_t(b);
        ++m_pos;
    }
    // bit j steps back from the most recent one
    bit_t back(size_t j) const { return m_bits[(m_pos - 1 - j) & m_mask]; }

  private:
    std::vector<uint8_t> m_bits;
    size_t m_pos = 0;
    size_t m_mask = 0;
};

// one tree node.  aux0/aux1 hold the children-product log for tree
// weighting, or the two switch weights (log k, log s) for tree switching;
// counts are stored single-precision, all probabilities double-precision
struct Node {
    double log_model; // log2 of the node's mixture value
    double log_prob;  // log2 of the node's own estimator value
    double aux0;
    double aux1;
    float a, b;        // estimator counts (zeros, ones)
    uint32_t child[2]; // node slot, tagged sprout record, or nil
};

// a sprout record stands in for a subtree that has seen exactly one symbol:
// the deeper context bits of that visit, its global time, and its symbol
// fully determine every node the subtree would contain
struct Sprout {
    uint64_t bits[4]; // context bits below the head, bit i via bit(i)
    uint64_t t0;      // 1-based global time of the recorded visit
    uint16_t len;     // number of stored context bits
    uint8_t sym;      // the recorded symbol

    int bit(int i) const { return int((bits[i >> 6] >> (i & 63)) & 1); }
    void setBit(int i, int v) {
        if (v)
            bits[i >> 6] |= uint64_t(1) << (i & 63);
        else
            bits[i >> 6] &= ~(uint64_t(1) << (i & 63));
    }
    // drop the leading bit (the head link that was just materialized)
    void trimFront() {
        for (int w = 0; w < 4; ++w) {
            bits[w] >>= 1;
            if (w < 3) bits[w] |= bits[w + 1] << 63;
        }
        --len;
    }
};

constexpr uint32_t kNilSlot = 0xFFFFFFFFu;
constexpr uint32_t kSproutTag = 0x80000000u;

inline bool slotIsSprout(uint32_t s) { return s != kNilSlot && (s & kSproutTag); }
inline uint32_t slotSproutId(uint32_t s) { return s & ~kSproutTag; }

// growth budgets are coding semantics: an encoder and a later decoder must
// stop allocating at exactly the same point, so these are fixed constants
// rather than tunables.  once a pool is exhausted the affected subtrees
// contribute a flat factor 1/2 per visit, which keeps every conditional
// normalized and both coder sides in lockstep.
constexpr size_t kNodeBudget = size_t(1) << 26;   // about 3.0 GiB of nodes
constexpr size_t kSproutBudget = size_t(1) << 25; // about 1.5 GiB of records

// chunked storage for nodes and sprout records; shared by every tree of one
// model instance so the budgets apply to the model as a whole
class NodeArena {
  public:
    NodeArena();

    uint32_t newNode(const Node& init); // kNilSlot when the budget is spent
    Node& node(uint32_t ix) { return m_nodes[ix >> kShift][ix & kMask]; }
    const Node& node(uint32_t ix) const { return m_nodes[ix >> kShift][ix & kMask]; }
    size_t nodeCount() const { return m_node_count; }
    size_t nodesAvailable() const { return kNodeBudget - m_node_count; }

    uint32_t newSprout(); // kNilSlot when the budget is spent
    void freeSprout(uint32_t id);
    Sprout& sprout(uint32_t id) { return m_sprouts[id >> kShift][id & kMask]; }
    const Sprout& sprout(uint32_t id) const { return m_sprouts[id >> kShift][id & kMask]; }
    size_t sproutCount() const { return m_sprout_count - m_free.size(); }

  private:
    static constexpr int kShift = 16; // 64k entries per block
    static constexpr uint32_t kMask = (1u << kShift) - 1;

    std::vector<std::unique_ptr<Node[]>> m_nodes;
    std::vector<std::unique_ptr<Sprout[]>> m_sprouts;
    std::vector<uint32_t> m_free;
    size_t m_node_count = 0;
    size_t m_sprout_count = 0;
};

// a single context tree.  the arena is supplied by the owner so several
// trees can share one (and one growth budget); the tree keeps its own
// history for standalone use and also accepts an external shared history.
class ContextTree {
  public:
    ContextTree(const ModelConfig& config, NodeArena& arena);

    // conditional probability of `bit` given the tree's own recent history;
    // a non-mutating dry run of the update path
    double predict(bit_t bit) const { return predictWith(m_history, bit); }

    // observe one bit under the tree's own history
    void update(bit_t bit) {
        updateWith(m_history, bit);
        m_history.push(bit);
    }

    // shared-history variants: the caller owns the context and pushes bits
    // into it itself
    double predictWith(const BitHistory& h, bit_t bit) const;
    void updateWith(const BitHistory& h, bit_t bit);

    // log2 of the block probability assigned to everything seen so far
    double logProb() const { return m_arena.node(m_root).log_model; }

    uint64_t symbolsSeen() const { return m_symbols_seen; }
    const ModelConfig& config() const { return m_config; }
    const NodeArena& arena() const { return m_arena; }
    uint32_t rootSlot() const { return m_root; }

  private:
    template <bool Mutate> double walk(const BitHistory& h, bit_t sym);

    ModelConfig m_config;
    NodeArena& m_arena;
    BitHistory m_history;
    uint32_t m_root;
    uint64_t m_symbols_seen = 0;
};

} // namespace cts

#endif
