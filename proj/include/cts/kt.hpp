// krichevsky-trofimov estimator: sequential probability assignment for a binary
// memoryless source, with optional geometric decay of the symbol counts

#ifndef __CTS_KT_HPP__
#define __CTS_KT_HPP__

#include <cmath>

namespace cts {

typedef int bit_t;

// probability the estimator assigns to bit b given real-valued counts
// (zeros, ones): (count_b + 1/2) / (zeros + ones + 1)
inline double ktPredict(double zeros, double ones, bit_t b) {
    return ((b ? ones : zeros) + 0.5) / (zeros + ones + 1.0);
}

// running estimator state: counts stay real-valued (decay makes them
// non-integral) together with the accumulated log2 block probability
struct KtCounts {
    double a = 0.0;        // zeros seen
    double b = 0.0;        // ones seen
    double log_prob = 0.0; // log2 of the block probability assigned so far

    double predict(bit_t bit) const { return ktPredict(a, b, bit); }

    // observe one bit: accumulate the prediction, bump the count, then decay
    // both counts; scale = 1 leaves them untouched
    void update(bit_t bit, double scale = 1.0) {
        log_prob += std::log2(predict(bit));
        (bit ? b : a) += 1.0;
        a *= scale;
        b *= scale;
    }
};

} // namespace cts

#endif
