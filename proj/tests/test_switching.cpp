#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "cts/oracle.hpp"
#include "cts/switching.hpp"

using cts::decayingSwitchRate;
using cts::SwitchEnsemble;
using cts::switchPriorLogWeight;
using cts::oracle::bruteSwitchPrior;
using cts::oracle::bruteSwitchProb;

namespace {

// every {1..N}-valued sequence of length n, via an odometer
std::vector<std::vector<int>> allIndexSequences(int n_models, int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> idx(size_t(n), 1);
    while (true) {
        out.push_back(idx);
        int j = 0;
        while (j < n && ++idx[size_t(j)] > n_models) {
            idx[size_t(j)] = 1;
            ++j;
        }
        if (j == n) break;
    }
    return out;
}

std::vector<std::vector<double>> randomConditionals(int n_models, int n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.05, 0.95);
    std::vector<std::vector<double>> cond(size_t(n_models), std::vector<double>(size_t(n), 0.0));
    for (auto& row : cond)
        for (auto& p : row) p = unif(rng);
    return cond;
}

double runEnsemble(SwitchEnsemble& ens, const std::vector<std::vector<double>>& cond) {
    size_t n = cond[0].size();
    for (size_t k = 0; k < n; ++k) {
        std::vector<double> step(cond.size());
        for (size_t j = 0; j < cond.size(); ++j) step[j] = cond[j][k];
        ens.step(step);
    }
    return ens.logProb();
}

} // namespace

TEST_CASE("first symbol gets the plain average of the models") {
    SwitchEnsemble ens(2, decayingSwitchRate);
    double c = ens.step({0.3, 0.7});
    CHECK(c == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(ens.logProb() == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(ens.stepIndex() == 2);
}

TEST_CASE("a single model passes through untouched") {
    SwitchEnsemble ens(1, decayingSwitchRate);
    double total = 0.0;
    for (double p : {0.25, 0.8, 0.5, 0.99}) {
        CHECK(ens.step({p}) == doctest::Approx(p).epsilon(1e-12));
        total += std::log2(p);
    }
    CHECK(ens.logProb() == doctest::Approx(total).epsilon(1e-12));
}

TEST_CASE("zero switch rate reduces to the fixed uniform mixture") {
    const int n_models = 3, n = 7;
    auto cond = randomConditionals(n_models, n, 11);
    SwitchEnsemble ens(n_models, [](uint64_t) { return 0.0; });
    double got = runEnsemble(ens, cond);

    long double mix = 0;
    for (int j = 0; j < n_models; ++j) {
        long double prod = 1.0L / n_models;
        for (int k = 0; k < n; ++k) prod *= cond[size_t(j)][size_t(k)];
        mix += prod;
    }
    CHECK(got == doctest::Approx(double(std::log2(mix))).epsilon(1e-12));
}

TEST_CASE("prior weight of hand-computed index sequences") {
    CHECK(switchPriorLogWeight({}, 2, decayingSwitchRate) == 0.0);
    // stay: 1/2 * (1 - 1/2)
    CHECK(switchPriorLogWeight({1, 1}, 2, decayingSwitchRate) ==
          doctest::Approx(-2.0).epsilon(1e-14));
    // switch among three: 1/3 * (1/2)/2
    CHECK(switchPriorLogWeight({1, 2}, 3, decayingSwitchRate) ==
          doctest::Approx(std::log2(1.0 / 12.0)).epsilon(1e-14));
    CHECK_THROWS_AS(switchPriorLogWeight({0}, 2, decayingSwitchRate), std::invalid_argument);
    CHECK_THROWS_AS(switchPriorLogWeight({3}, 2, decayingSwitchRate), std::invalid_argument);
}

TEST_CASE("prior sums to one over all index sequences") {
    for (int n_models : {1, 2, 3}) {
        for (int n : {1, 2, 5, 10}) {
            long double total = 0;
            for (const auto& idx : allIndexSequences(n_models, n)) {
                total += std::exp2((long double)switchPriorLogWeight(idx, n_models,
                                                                     decayingSwitchRate));
                // the independent product agrees with the incremental form
                long double direct = bruteSwitchPrior(idx, n_models, decayingSwitchRate);
                CHECK(double(std::log2(direct)) ==
                      doctest::Approx(switchPriorLogWeight(idx, n_models, decayingSwitchRate))
                          .epsilon(1e-12));
            }
            CHECK(double(total) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    // one larger fan-out as a spot check
    long double total = 0;
    for (const auto& idx : allIndexSequences(4, 6))
        total += bruteSwitchPrior(idx, 4, decayingSwitchRate);
    CHECK(double(total) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("prior cost of m switches stays within (m+1)(log N + log n)") {
    for (int n_models : {2, 3}) {
        for (int n = 1; n <= 10; ++n) {
            for (const auto& idx : allIndexSequences(n_models, n)) {
                int switches = 0;
                for (size_t t = 1; t < idx.size(); ++t)
                    if (idx[t] != idx[t - 1]) ++switches;
                double cost = -switchPriorLogWeight(idx, n_models, decayingSwitchRate);
                double bound =
                    (switches + 1) * (std::log2(double(n_models)) + std::log2(double(n)));
                CHECK(cost <= bound + 1e-9);
            }
        }
    }
}

TEST_CASE("the mixture dominates every single index sequence") {
    const int n_models = 3, n = 6;
    auto cond = randomConditionals(n_models, n, 23);
    SwitchEnsemble ens(n_models, decayingSwitchRate);
    double total = runEnsemble(ens, cond);

    for (const auto& idx : allIndexSequences(n_models, n)) {
        double along = switchPriorLogWeight(idx, n_models, decayingSwitchRate);
        for (int k = 0; k < n; ++k) along += std::log2(cond[size_t(idx[size_t(k)] - 1)][size_t(k)]);
        CHECK(total >= along - 1e-12);
    }
}

TEST_CASE("incremental ensemble equals the direct sum over index sequences") {
    std::mt19937_64 seeds(4242);
    for (int n_models : {1, 2, 3}) {
        for (int n = 1; n <= 8; ++n) {
            for (int rep = 0; rep < 50; ++rep) {
                auto cond = randomConditionals(n_models, n, seeds());
                SwitchEnsemble ens(n_models, decayingSwitchRate);
                double got = runEnsemble(ens, cond);
                long double want = bruteSwitchProb(cond, decayingSwitchRate);
                REQUIRE(got == doctest::Approx(double(std::log2(want))).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("running weights decompose over index sequences") {
    const int n_models = 3, n = 5;
    auto cond = randomConditionals(n_models, n, 37);
    SwitchEnsemble ens(n_models, decayingSwitchRate);
    runEnsemble(ens, cond);

    // after n steps, weight j sums the evidence of every sequence extended
    // by one transition into model j
    for (int j = 1; j <= n_models; ++j) {
        long double want = 0;
        for (const auto& idx : allIndexSequences(n_models, n)) {
            std::vector<int> ext = idx;
            ext.push_back(j);
            long double term = bruteSwitchPrior(ext, n_models, decayingSwitchRate);
            for (int k = 0; k < n; ++k) term *= cond[size_t(idx[size_t(k)] - 1)][size_t(k)];
            want += term;
        }
        CHECK(ens.logWeights()[size_t(j - 1)] ==
              doctest::Approx(double(std::log2(want))).epsilon(1e-10));
    }

    // and the weights always sum to the joint probability
    long double wsum = 0;
    for (double lw : ens.logWeights()) wsum += std::exp2((long double)lw);
    CHECK(double(std::log2(wsum)) == doctest::Approx(ens.logProb()).epsilon(1e-12));
}

TEST_CASE("the rate past the final symbol cannot touch the total") {
    const int n = 5;
    auto cond = randomConditionals(2, n, 7);
    SwitchEnsemble a(2, decayingSwitchRate);
    SwitchEnsemble b(2, [](uint64_t t) { return t == 6 ? 0.4 : 1.0 / double(t); });
    CHECK(runEnsemble(a, cond) == runEnsemble(b, cond));
}

TEST_CASE("invalid inputs are rejected") {
    CHECK_THROWS_AS(SwitchEnsemble(0, decayingSwitchRate), std::invalid_argument);
    SwitchEnsemble ens(2, decayingSwitchRate);
    CHECK_THROWS_AS(ens.step({0.5}), std::invalid_argument);
    CHECK_THROWS_AS(ens.step({0.5, 1.5}), std::invalid_argument);
    SwitchEnsemble hot(2, [](uint64_t) { return 0.6; }); // stay weight goes negative
    CHECK_THROWS_AS(hot.step({0.5, 0.5}), std::domain_error);
}
