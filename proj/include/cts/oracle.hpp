// brute-force reference implementations, linked by tests only: direct sums
// over suffix sets and model-index sequences at desk scale, plus tree-source
// sampling helpers.  deliberately independent of the incremental library code
// so the two sides can be compared against each other.

#ifndef __CTS_ORACLE_HPP__
#define __CTS_ORACLE_HPP__

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace cts::oracle {

// complete suffix set: sorted member strings over {'0','1'}, natural order
// (the last character is the most recent bit)
using SuffixSet = std::vector<std::string>;

// every complete suffix set of depth <= D; sizes go 1, 2, 5, 26, 677, ...
std::vector<SuffixSet> enumerateSuffixSets(int depth);

// bits in the natural tree-structure code of S inside a depth-D template:
// one bit per internal node, one per leaf shallower than D
int structureCost(const SuffixSet& s, int depth);

// depth of the deepest member
int suffixDepth(const SuffixSet& s);

// per-leaf parameter redundancy envelope: k for k < 1, 1/2 log2 k + 1 after
double gammaCost(double k);

// log2 of the estimator's block probability for a bit subsequence, with
// optional geometric count decay (linear-domain product)
long double ktBlockLogProb(const std::vector<int>& bits, double scale = 1.0);

// the member of S matching the (zero-padded) history before position pos,
// or nullptr if none does
const std::string* matchSuffix(const SuffixSet& s, const std::vector<int>& x, size_t pos);

// log2 Pr(x | S, Theta) for a tree source; theta[i] = P(next bit = 1 | S[i])
double pstLogProb(const SuffixSet& s, const std::vector<double>& theta,
                  const std::vector<int>& x);

// draw n bits from the tree source, zero-padded initial history
std::vector<int> pstSample(const SuffixSet& s, const std::vector<double>& theta,
                           size_t n, uint64_t seed);

// direct tree mixture: log2 sum_S 2^-cost(S) prod_s xi(x^s), S over depth-D sets
double bruteCtwLogProb(const std::vector<int>& x, int depth);

// direct switching tree: per-node sums over model-index sequences, with the
// switch rate between a node's visits k-1 and k equal to 1/(t_{k-1}+1) where
// t_{k-1} is the global position of visit k-1
double bruteCtsLogProb(const std::vector<int>& x, int depth, double scale = 1.0,
                       double init_k = 0.5, double init_s = 0.5);

// direct switch mixture over N models: cond[j][k] is model j's conditional
// probability of symbol k (0-based) given the prefix; schedule maps t >= 2 to
// the switch rate alpha_t; returns the joint probability
long double bruteSwitchProb(const std::vector<std::vector<double>>& cond,
                            const std::function<double(uint64_t)>& schedule);

// prior probability of one model-index sequence (values 1..N), evaluated by
// the textbook product rather than any incremental identity
long double bruteSwitchPrior(const std::vector<int>& indices, int n_models,
                             const std::function<double(uint64_t)>& schedule);

} // namespace cts::oracle

#endif
