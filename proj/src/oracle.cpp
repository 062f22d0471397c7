#include "cts/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

namespace cts::oracle {

namespace {

// history bit `back` steps before position pos, zero-padded at the start
int histBit(const std::vector<int>& x, size_t pos, size_t back) {
    return back < pos ? x[pos - 1 - back] : 0;
}

// does the (zero-padded) history before pos end with context string c?
bool contextMatches(const std::string& c, const std::vector<int>& x, size_t pos) {
    for (size_t i = 0; i < c.size(); ++i)
        if (c[c.size() - 1 - i] - '0' != histBit(x, pos, i)) return false;
    return true;
}

} // namespace

std::vector<SuffixSet> enumerateSuffixSets(int depth) {
    std::vector<SuffixSet> out;
    out.push_back({""});
    if (depth <= 0) return out;
    auto sub = enumerateSuffixSets(depth - 1);
    for (const auto& s1 : sub)
        for (const auto& s0 : sub) {
            SuffixSet s;
            for (const auto& u : s1) s.push_back(u + "1");
            for (const auto& u : s0) s.push_back(u + "0");
            std::sort(s.begin(), s.end());
            out.push_back(s);
        }
    return out;
}

int structureCost(const SuffixSet& s, int depth) {
    if (s.size() == 1 && s[0].empty()) return depth > 0 ? 1 : 0;
    SuffixSet s0, s1;
    for (const auto& u : s)
        (u.back() == '1' ? s1 : s0).push_back(u.substr(0, u.size() - 1));
    return 1 + structureCost(s1, depth - 1) + structureCost(s0, depth - 1);
}

int suffixDepth(const SuffixSet& s) {
    size_t d = 0;
    for (const auto& u : s) d = std::max(d, u.size());
    return int(d);
}

double gammaCost(double k) { return k < 1.0 ? k : 0.5 * std::log2(k) + 1.0; }

long double ktBlockLogProb(const std::vector<int>& bits, double scale) {
    long double a = 0, b = 0, lp = 0;
    for (int bit : bits) {
        long double p = ((bit ? b : a) + 0.5L) / (a + b + 1.0L);
        lp += std::log2(p);
        (bit ? b : a) += 1.0L;
        a *= scale;
        b *= scale;
    }
    return lp;
}

const std::string* matchSuffix(const SuffixSet& s, const std::vector<int>& x, size_t pos) {
    for (const auto& u : s)
        if (contextMatches(u, x, pos)) return &u;
    return nullptr;
}

double pstLogProb(const SuffixSet& s, const std::vector<double>& theta,
                  const std::vector<int>& x) {
    double lp = 0;
    for (size_t pos = 0; pos < x.size(); ++pos) {
        const std::string* m = matchSuffix(s, x, pos);
        double p1 = theta[size_t(m - s.data())];
        double p = x[pos] ? p1 : 1.0 - p1;
        if (p <= 0.0) return -std::numeric_limits<double>::infinity();
        lp += std::log2(p);
    }
    return lp;
}

std::vector<int> pstSample(const SuffixSet& s, const std::vector<double>& theta,
                           size_t n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<int> x;
    x.reserve(n);
    for (size_t pos = 0; pos < n; ++pos) {
        const std::string* m = matchSuffix(s, x, pos);
        x.push_back(unif(rng) < theta[size_t(m - s.data())] ? 1 : 0);
    }
    return x;
}

double bruteCtwLogProb(const std::vector<int>& x, int depth) {
    long double total = 0;
    for (const auto& s : enumerateSuffixSets(depth)) {
        long double term = std::exp2((long double)(-structureCost(s, depth)));
        for (const auto& u : s) {
            std::vector<int> sub;
            for (size_t pos = 0; pos < x.size(); ++pos)
                if (contextMatches(u, x, pos)) sub.push_back(x[pos]);
            term *= std::exp2(ktBlockLogProb(sub));
        }
        total += term;
    }
    return double(std::log2(total));
}

namespace {

// per-node switching value by direct enumeration of model-index sequences.
// eval(c, t) is node c's value over its first t visits; the split expert's
// per-visit factor is the on-path child's value ratio (the other child's
// value cancels between numerator and denominator).
struct CtsEval {
    const std::vector<int>& x;
    int depth;
    double scale, init_k, init_s;
    std::map<std::pair<std::string, int>, long double> memo;

    std::vector<size_t> visits(const std::string& c) const {
        std::vector<size_t> v;
        for (size_t pos = 0; pos < x.size(); ++pos)
            if (contextMatches(c, x, pos)) v.push_back(pos);
        return v;
    }

    long double eval(const std::string& c, int t) {
        if (t == 0) return 1.0L;
        auto key = std::make_pair(c, t);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;

        auto vis = visits(c);
        long double out;
        if (int(c.size()) == depth) {
            std::vector<int> sub;
            for (int k = 0; k < t; ++k) sub.push_back(x[vis[size_t(k)]]);
            out = std::exp2(ktBlockLogProb(sub, scale));
        } else {
            std::vector<long double> kf(size_t(t), 0.0L);
            std::vector<long double> zf(size_t(t), 0.0L);
            long double a = 0, b = 0;
            for (int k = 0; k < t; ++k) {
                int sym = x[vis[size_t(k)]];
                kf[size_t(k)] = ((sym ? b : a) + 0.5L) / (a + b + 1.0L);
                (sym ? b : a) += 1.0L;
                a *= scale;
                b *= scale;
            }
            int cnt[2] = {0, 0};
            for (int k = 0; k < t; ++k) {
                int cb = histBit(x, vis[size_t(k)], c.size());
                std::string child = std::string(1, char('0' + cb)) + c;
                ++cnt[cb];
                zf[size_t(k)] = eval(child, cnt[cb]) / eval(child, cnt[cb] - 1);
            }
            // switch rate into visit k is set by the global time of visit k-1
            out = 0;
            for (unsigned mask = 0; mask < (1u << t); ++mask) {
                long double p = 1;
                for (int k = 0; k < t; ++k) {
                    int ik = int((mask >> k) & 1u); // 0: own estimator, 1: split
                    if (k == 0) {
                        p *= ik ? init_s : init_k;
                    } else {
                        long double alpha = 1.0L / (long double)(vis[size_t(k - 1)] + 2);
                        int prev = int((mask >> (k - 1)) & 1u);
                        p *= ik == prev ? 1.0L - alpha : alpha;
                    }
                    p *= ik ? zf[size_t(k)] : kf[size_t(k)];
                }
                out += p;
            }
        }
        memo[key] = out;
        return out;
    }
};

} // namespace

double bruteCtsLogProb(const std::vector<int>& x, int depth, double scale,
                       double init_k, double init_s) {
    CtsEval ev{x, depth, scale, init_k, init_s, {}};
    int t = int(ev.visits("").size());
    return double(std::log2(ev.eval("", t)));
}

long double bruteSwitchProb(const std::vector<std::vector<double>>& cond,
                            const std::function<double(uint64_t)>& schedule) {
    int n_models = int(cond.size());
    if (n_models < 1) throw std::invalid_argument("need at least one model");
    size_t n = cond[0].size();
    if (n == 0) return 1.0L;

    std::vector<int> idx(n, 0);
    long double total = 0;
    while (true) {
        long double p = 1.0L / n_models;
        for (size_t k = 0; k < n; ++k) {
            if (k > 0 && n_models > 1) {
                long double alpha = schedule(k + 1);
                p *= idx[k] == idx[k - 1] ? 1.0L - alpha : alpha / (n_models - 1);
            }
            p *= cond[size_t(idx[k])][k];
        }
        total += p;
        size_t j = 0;
        while (j < n && ++idx[j] == n_models) idx[j++] = 0;
        if (j == n) break;
    }
    return total;
}

long double bruteSwitchPrior(const std::vector<int>& indices, int n_models,
                             const std::function<double(uint64_t)>& schedule) {
    if (n_models < 1) throw std::invalid_argument("need at least one model");
    for (int ix : indices)
        if (ix < 1 || ix > n_models) throw std::invalid_argument("model index out of range");
    if (indices.empty()) return 1.0L;

    long double p = 1.0L / n_models;
    for (size_t k = 1; k < indices.size(); ++k) {
        if (n_models == 1) continue;
        long double alpha = schedule(k + 1);
        p *= indices[k] == indices[k - 1] ? 1.0L - alpha : alpha / (n_models - 1);
    }
    return p;
}

} // namespace cts::oracle
