// switching ensemble: sequential mixture over N models that tracks the best
// time-varying sequence of models, with a per-step switch rate schedule.
// weights are kept in the log2 domain; their linear sum always equals the
// joint probability assigned to the symbols seen so far.

#ifndef __CTS_SWITCHING_HPP__
#define __CTS_SWITCHING_HPP__

#include <cstdint>
#include <functional>
#include <vector>

namespace cts {

// maps a time index t >= 2 to the switch rate alpha_t; alpha_t must lie in
// [0, (N-1)/N] so the incremental weight update keeps non-negative terms
using SwitchSchedule = std::function<double(uint64_t)>;

// decaying schedule alpha_t = 1/t
inline double decayingSwitchRate(uint64_t t) { return 1.0 / double(t); }

class SwitchEnsemble {
  public:
    SwitchEnsemble(int n_models, SwitchSchedule schedule);

    // one sequential step: cond_probs[j] is model j's conditional probability
    // of the observed symbol; returns the ensemble's conditional probability
    // of that symbol and advances the weights
    double step(const std::vector<double>& cond_probs);

    int size() const { return int(m_log_w.size()); }

    // 1-based index of the next symbol to be processed
    uint64_t stepIndex() const { return m_step; }

    // log2 of the joint probability assigned to everything seen so far
    double logProb() const { return m_total_log_prob; }

    // log2-domain weights; sum of 2^w_j equals 2^logProb()
    const std::vector<double>& logWeights() const { return m_log_w; }

  private:
    std::vector<double> m_log_w;
    SwitchSchedule m_schedule;
    uint64_t m_step;
    double m_total_log_prob;
};

// log2 of the prior probability of one model-index sequence (values in 1..N)
// under the switch prior with the given rate schedule; an empty sequence has
// probability 1
double switchPriorLogWeight(const std::vector<int>& indices, int n_models,
                            const SwitchSchedule& schedule);

} // namespace cts

#endif
