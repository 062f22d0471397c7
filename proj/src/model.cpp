#include "cts/model.hpp"

#include <cmath>
#include <stdexcept>

#include "cts/logsum.hpp"

namespace cts {

const char* variantName(Variant v) {
    switch (v) {
    case Variant::CTW: return "ctw";
    case Variant::CTS: return "cts";
    case Variant::CTS_STAR: return "cts-star";
    }
    return "?";
}

ModelConfig ModelConfig::ctw(int depth) { return {Variant::CTW, depth, 1.0, 0.5, 0.5}; }
ModelConfig ModelConfig::cts(int depth) { return {Variant::CTS, depth, 1.0, 0.5, 0.5}; }
ModelConfig ModelConfig::ctsStar(int depth) { return {Variant::CTS_STAR, depth, 0.98, 0.075, 0.925}; }

void ModelConfig::validate() const {
    if (depth < 0 || depth > kMaxDepth)
        throw std::invalid_argument("model depth outside 0..256");
    if (!(count_scale > 0.0 && count_scale <= 1.0))
        throw std::invalid_argument("count scale outside (0, 1]");
    if (!(init_k >= 0.0) || !(init_s >= 0.0) || std::abs(init_k + init_s - 1.0) > 1e-12)
        throw std::invalid_argument("fresh weights must be non-negative and sum to 1");
}

BitHistory::BitHistory(int capacity) {
    size_t cap = 1;
    while (cap < size_t(capacity < 1 ? 1 : capacity)) cap <<= 1;
    m_bits.assign(cap, 0);
    m_mask = cap - 1;
}

NodeArena::NodeArena() = default;

uint32_t NodeArena::newNode(const Node& init) {
    if (m_node_count >= kNodeBudget) return kNilSlot;
    if ((m_node_count >> kShift) >= m_nodes.size())
        m_nodes.emplace_back(new Node[size_t(1) << kShift]);
    uint32_t ix = uint32_t(m_node_count++);
    node(ix) = init;
    return ix;
}

uint32_t NodeArena::newSprout() {
    if (!m_free.empty()) {
        uint32_t id = m_free.back();
        m_free.pop_back();
        return id;
    }
    if (m_sprout_count >= kSproutBudget) return kNilSlot;
    if ((m_sprout_count >> kShift) >= m_sprouts.size())
        m_sprouts.emplace_back(new Sprout[size_t(1) << kShift]);
    return uint32_t(m_sprout_count++);
}

void NodeArena::freeSprout(uint32_t id) { m_free.push_back(id); }

namespace {

// a fresh node: value 1, nothing observed
Node freshNode(const ModelConfig& c) {
    Node n;
    n.log_model = 0.0;
    n.log_prob = 0.0;
    if (c.variant == Variant::CTW) {
        n.aux0 = 0.0; // children-product value 1
        n.aux1 = 0.0;
    } else {
        n.aux0 = c.init_k > 0.0 ? std::log2(c.init_k) : kNegInf;
        n.aux1 = c.init_s > 0.0 ? std::log2(c.init_s) : kNegInf;
    }
    n.a = n.b = 0.0f;
    n.child[0] = n.child[1] = kNilSlot;
    return n;
}

void bumpCounts(Node& nd, bit_t sym, double scale) {
    double a = nd.a, b = nd.b;
    (sym ? b : a) += 1.0;
    nd.a = float(a * scale);
    nd.b = float(b * scale);
}

// the state every node of a one-visit subtree shares; this is the closed
// form a sprout record stands for, used both to materialize real nodes and
// to evaluate the record virtually on the prediction pass
struct ChainState {
    double a, b;         // one decayed count of the recorded symbol
    double lkt;          // log2 of the chain estimator's conditional of sym
    double log_k, log_s; // switch weights right after the recorded visit
};

ChainState chainState(const ModelConfig& cfg, const Sprout& r, bit_t sym) {
    ChainState cs;
    double c = double(float(cfg.count_scale)); // counts live in single precision
    cs.a = r.sym == 0 ? c : 0.0;
    cs.b = r.sym == 1 ? c : 0.0;
    cs.lkt = std::log2(ktPredict(cs.a, cs.b, sym));
    // one switch-weight update from (init_k, init_s)/1 with both conditional
    // ratios equal to 1/2, at the recorded visit's time
    double a0 = 1.0 / double(r.t0 + 1);
    cs.log_k = std::log2(0.5 * a0 + (1.0 - 2.0 * a0) * cfg.init_k * 0.5);
    cs.log_s = std::log2(0.5 * a0 + (1.0 - 2.0 * a0) * cfg.init_s * 0.5);
    return cs;
}

// prediction-side evaluation of a sprout record hanging below parent_depth:
// the log2 ratio its subtree would contribute for `sym`, mirroring exactly
// what the mutating pass materializes (including the node-budget freeze)
double virtualFold(const ModelConfig& cfg, const NodeArena& arena, const Sprout& r,
                   int parent_depth, const BitHistory& h, bit_t sym) {
    ChainState cs = chainState(cfg, r, sym);
    int q = 0;
    while (q < int(r.len) && h.back(size_t(parent_depth + 1 + q)) == r.bit(q)) ++q;

    size_t avail = arena.nodesAvailable();
    int treaded = size_t(q) + 1 <= avail ? q + 1 : int(avail);

    double delta;
    int folds;
    if (treaded < q + 1) {
        delta = -1.0; // budget freeze mid-chain: flat factor below
        folds = treaded;
    } else if (q == int(r.len)) {
        delta = cs.lkt; // recorded leaf lies on the current path
        folds = q;
    } else {
        delta = -1.0; // divergence: fresh branch below the deepest shared node
        folds = q + 1;
    }
    if (cfg.variant == Variant::CTW) {
        for (int i = 0; i < folds; ++i)
            delta = logsum2(cs.lkt - 2.0, delta - 2.0) + 1.0;
    } else {
        for (int i = 0; i < folds; ++i)
            delta = logsum2(cs.log_k + cs.lkt, cs.log_s + delta) + 1.0;
    }
    return delta;
}

} // namespace

ContextTree::ContextTree(const ModelConfig& config, NodeArena& arena)
    : m_config(config), m_arena(arena), m_history(config.depth) {
    m_config.validate();
    m_root = m_arena.newNode(freshNode(m_config));
    if (m_root == kNilSlot) throw std::runtime_error("node budget exhausted");
}

template <bool Mutate> double ContextTree::walk(const BitHistory& h, bit_t sym) {
    const int D = m_config.depth;
    const bool ctw = m_config.variant == Variant::CTW;
    const double scale = m_config.count_scale;

    // switch rate for this step, keyed to the tree's own symbol count
    const uint64_t n = m_symbols_seen + 1;
    const double alpha = 1.0 / double(n + 1);
    const double log_alpha = std::log2(alpha);
    const double stay = 1.0 - 2.0 * alpha;
    const double log_stay = stay > 0.0 ? std::log2(stay) : kNegInf;

    uint32_t path[kMaxDepth + 1];
    path[0] = m_root;
    int m = 0;

    // descend along the context, materializing one-visit records level by
    // level on the mutating pass; stop at the leaf or at a missing subtree.
    // `below` collects the log2 value ratio of whatever lies under path[m].
    double below;
    while (true) {
        if (m == D) {
            Node& leaf = m_arena.node(path[m]);
            double lkt = std::log2(ktPredict(leaf.a, leaf.b, sym));
            if (Mutate) {
                leaf.log_prob += lkt;
                bumpCounts(leaf, sym, scale);
                leaf.log_model = leaf.log_prob;
            }
            below = lkt;
            --m; // fold starts at the leaf's parent
            break;
        }
        bit_t cb = h.back(size_t(m));
        uint32_t slot = m_arena.node(path[m]).child[cb];
        if (slot == kNilSlot) {
            // fresh branch: its whole chain assigns 1/2 to this first visit
            if (Mutate) {
                uint32_t rid = m_arena.newSprout();
                if (rid != kNilSlot) {
                    Sprout& r = m_arena.sprout(rid);
                    r.bits[0] = r.bits[1] = r.bits[2] = r.bits[3] = 0;
                    r.t0 = n;
                    r.len = uint16_t(D - m - 1);
                    r.sym = uint8_t(sym);
                    for (int i = 0; i < int(r.len); ++i)
                        r.setBit(i, h.back(size_t(m + 1 + i)));
                    m_arena.node(path[m]).child[cb] = kSproutTag | rid;
                }
            }
            below = -1.0;
            break;
        }
        if (!slotIsSprout(slot)) {
            path[++m] = slot;
            continue;
        }
        uint32_t rid = slotSproutId(slot);
        Sprout& r = m_arena.sprout(rid);
        if (!Mutate) {
            below = virtualFold(m_config, m_arena, r, m, h, sym);
            break;
        }
        if (m_arena.nodesAvailable() == 0) {
            below = -1.0; // budget freeze: the record stays dormant
            break;
        }
        // materialize the record's head one level down and keep walking
        ChainState cs = chainState(m_config, r, sym);
        Node nd;
        nd.log_model = -1.0;
        nd.log_prob = -1.0;
        if (ctw) {
            nd.aux0 = -1.0; // the rest of the chain holds value 1/2
            nd.aux1 = 0.0;
        } else {
            nd.aux0 = cs.log_k;
            nd.aux1 = cs.log_s;
        }
        nd.a = float(cs.a);
        nd.b = float(cs.b);
        nd.child[0] = nd.child[1] = kNilSlot;
        uint32_t nid = m_arena.newNode(nd);
        m_arena.node(path[m]).child[cb] = nid;
        if (r.len == 0) {
            m_arena.freeSprout(rid);
        } else {
            int nb = r.bit(0);
            r.trimFront();
            m_arena.node(nid).child[nb] = kSproutTag | rid;
        }
        path[++m] = nid;
    }

    // fold the ratio up through the real path
    for (int i = m; i >= 0; --i) {
        Node& nd = m_arena.node(path[i]);
        double lkt = std::log2(ktPredict(nd.a, nd.b, sym));
        double lm_new;
        if (ctw) {
            double lp_new = nd.log_prob + lkt;
            double lch_new = nd.aux0 + below;
            lm_new = logsum2(lp_new - 1.0, lch_new - 1.0);
            below = lm_new - nd.log_model;
            if (Mutate) {
                nd.log_prob = lp_new;
                nd.aux0 = lch_new;
                bumpCounts(nd, sym, scale);
                nd.log_model = lm_new;
            }
        } else {
            lm_new = logsum2(nd.aux0 + lkt, nd.aux1 + below);
            double delta = lm_new - nd.log_model;
            if (Mutate) {
                nd.aux0 = logsum2(log_alpha + lm_new, log_stay + nd.aux0 + lkt);
                nd.aux1 = logsum2(log_alpha + lm_new, log_stay + nd.aux1 + below);
                nd.log_prob += lkt;
                bumpCounts(nd, sym, scale);
                nd.log_model = lm_new;
            }
            below = delta;
        }
    }

    if (Mutate) ++m_symbols_seen;
    return below; // log2 of the conditional at the root
}

double ContextTree::predictWith(const BitHistory& h, bit_t bit) const {
    return std::exp2(const_cast<ContextTree*>(this)->walk<false>(h, bit));
}

void ContextTree::updateWith(const BitHistory& h, bit_t bit) { walk<true>(h, bit); }

} // namespace cts
