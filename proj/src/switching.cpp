#include "cts/switching.hpp"

#include <cmath>
#include <stdexcept>

#include "cts/logsum.hpp"

namespace cts {

SwitchEnsemble::SwitchEnsemble(int n_models, SwitchSchedule schedule)
    : m_schedule(std::move(schedule)), m_step(1), m_total_log_prob(0.0) {
    if (n_models < 1) throw std::invalid_argument("ensemble needs at least one model");
    if (!m_schedule) throw std::invalid_argument("missing switch rate schedule");
    m_log_w.assign(size_t(n_models), -std::log2(double(n_models)));
}

double SwitchEnsemble::step(const std::vector<double>& cond_probs) {
    const int n = size();
    if (int(cond_probs.size()) != n)
        throw std::invalid_argument("conditional probability count != model count");

    // log2 of each model's conditional, validating as we go
    std::vector<double> log_p(cond_probs.size());
    for (int j = 0; j < n; ++j) {
        double p = cond_probs[j];
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("conditional probability outside [0, 1]");
        log_p[j] = p > 0.0 ? std::log2(p) : kNegInf;
    }

    // r = sum_j w_j * p_j, the joint probability including this symbol
    double hi = kNegInf;
    for (int j = 0; j < n; ++j) hi = std::max(hi, m_log_w[j] + log_p[j]);
    double log_r;
    if (hi == kNegInf) {
        log_r = kNegInf;
    } else {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += std::exp2(m_log_w[j] + log_p[j] - hi);
        log_r = hi + std::log2(acc);
    }
    if (log_r == kNegInf)
        throw std::domain_error("ensemble probability reached zero");

    double log_cond = log_r - m_total_log_prob;

    if (n == 1) {
        // nothing to switch between
        m_log_w[0] = log_r;
    } else {
        double alpha = m_schedule(m_step + 1);
        double stay = (1.0 - alpha) * n - 1.0;
        if (!(alpha >= 0.0) || stay < 0.0)
            throw std::domain_error("switch rate outside [0, (N-1)/N]");

        double log_alpha = alpha > 0.0 ? std::log2(alpha) : kNegInf;
        double log_stay = stay > 0.0 ? std::log2(stay) : kNegInf;
        double log_nm1 = std::log2(double(n - 1));
        for (int j = 0; j < n; ++j) {
            m_log_w[j] = logsum2(log_alpha + log_r, log_stay + m_log_w[j] + log_p[j]) - log_nm1;
        }
    }

    m_step += 1;
    m_total_log_prob = log_r;
    return std::exp2(log_cond);
}

double switchPriorLogWeight(const std::vector<int>& indices, int n_models,
                            const SwitchSchedule& schedule) {
    if (n_models < 1) throw std::invalid_argument("need at least one model");
    for (int ix : indices)
        if (ix < 1 || ix > n_models) throw std::invalid_argument("model index outside 1..N");

    if (indices.empty()) return 0.0;

    double lw = -std::log2(double(n_models));
    // with a single model every stay is forced, so each transition factor is 1
    if (n_models == 1) return lw;
    for (size_t t = 2; t <= indices.size(); ++t) {
        double alpha = schedule(uint64_t(t));
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw std::domain_error("switch rate outside [0, 1]");
        double f = (indices[t - 1] == indices[t - 2]) ? (1.0 - alpha)
                                                      : alpha / double(n_models - 1);
        lw += f > 0.0 ? std::log2(f) : kNegInf;
    }
    return lw;
}

} // namespace cts
