// command line front end: whole-file compression and decompression, a corpus
// benchmark with optional baseline checking, and a quick self test that
// cross-checks the incremental models against their brute-force twins.
//
// exit codes: 0 success, 2 bad invocation, 3 file system trouble,
// 4 integrity failure (malformed container or self test mismatch),
// 5 benchmark rates outside the baseline tolerances.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cts/bench.hpp"
#include "cts/codec.hpp"
#include "cts/coder.hpp"
#include "cts/model.hpp"
#include "cts/oracle.hpp"
#include "cts/switching.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitIntegrity = 4;
constexpr int kExitBaseline = 5;

bool parseVariant(const std::string& name, cts::Variant& out) {
    if (name == "ctw") out = cts::Variant::CTW;
    else if (name == "cts") out = cts::Variant::CTS;
    else if (name == "cts-star") out = cts::Variant::CTS_STAR;
    else return false;
    return true;
}

// write via a sibling temporary and rename, so the target never holds a
// partial result
void writeAtomically(const std::string& target, const std::vector<uint8_t>& data) {
    fs::path tmp = fs::path(target);
    tmp += ".tmp";
    try {
        cts::writeFileBytes(tmp.string(), data);
        fs::rename(tmp, target);
    } catch (...) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
}

int runCompress(const std::string& in_path, const std::string& out_path,
                const std::string& variant_name, int depth) {
    cts::Variant variant;
    if (!parseVariant(variant_name, variant)) {
        std::cerr << "unknown variant '" << variant_name << "'\n";
        return kExitUsage;
    }
    cts::ModelConfig cfg;
    switch (variant) {
    case cts::Variant::CTW: cfg = cts::ModelConfig::ctw(depth); break;
    case cts::Variant::CTS: cfg = cts::ModelConfig::cts(depth); break;
    case cts::Variant::CTS_STAR: cfg = cts::ModelConfig::ctsStar(depth); break;
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }
    try {
        auto input = cts::readFileBytes(in_path);
        auto packed = cts::compress(input, cfg);
        writeAtomically(out_path, packed);
        std::cerr << in_path << ": " << input.size() << " -> " << packed.size()
                  << " bytes\n";
    } catch (const std::runtime_error& e) {
        std::cerr << e.what() << "\n";
        return kExitIo;
    }
    return 0;
}

int runDecompress(const std::string& in_path, const std::string& out_path) {
    std::vector<uint8_t> packed;
    try {
        packed = cts::readFileBytes(in_path);
    } catch (const std::runtime_error& e) {
        std::cerr << e.what() << "\n";
        return kExitIo;
    }
    std::vector<uint8_t> output;
    try {
        output = cts::decompress(packed);
    } catch (const cts::CodecError& e) {
        std::cerr << in_path << ": " << e.what() << "\n";
        return kExitIntegrity;
    }
    try {
        writeAtomically(out_path, output);
    } catch (const std::runtime_error& e) {
        std::cerr << e.what() << "\n";
        return kExitIo;
    }
    return 0;
}

bool parseSpec(const std::string& text, cts::RunSpec& out) {
    size_t colon = text.find(':');
    if (colon == std::string::npos) return false;
    if (!parseVariant(text.substr(0, colon), out.variant)) return false;
    try {
        out.depth = std::stoi(text.substr(colon + 1));
    } catch (...) {
        return false;
    }
    return out.depth >= 0 && out.depth <= cts::kMaxDepth;
}

int runBench(const std::string& dir, const std::string& csv_out,
             const std::string& baseline_path, std::vector<std::string> spec_texts) {
    if (spec_texts.empty())
        spec_texts = {"ctw:48", "cts:48", "cts-star:48", "cts-star:160"};
    std::vector<cts::RunSpec> specs;
    for (const auto& t : spec_texts) {
        cts::RunSpec spec;
        if (!parseSpec(t, spec)) {
            std::cerr << "bad spec '" << t << "' (want variant:depth)\n";
            return kExitUsage;
        }
        specs.push_back(spec);
    }

    std::vector<std::string> paths;
    try {
        for (const auto& entry : fs::directory_iterator(dir))
            if (entry.is_regular_file()) paths.push_back(entry.path().string());
    } catch (const fs::filesystem_error& e) {
        std::cerr << e.what() << "\n";
        return kExitIo;
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) {
        std::cerr << dir << ": no files to benchmark\n";
        return kExitIo;
    }

    std::vector<cts::FileResult> rows;
    try {
        rows = cts::runCorpus(paths, specs);
    } catch (const std::runtime_error& e) {
        std::cerr << e.what() << "\n";
        return kExitIo;
    }

    if (csv_out.empty() || csv_out == "-") {
        cts::writeCsv(std::cout, rows);
    } else {
        std::ofstream f(csv_out, std::ios::trunc);
        if (!f) {
            std::cerr << "cannot create " << csv_out << "\n";
            return kExitIo;
        }
        cts::writeCsv(f, rows);
    }
    for (const auto& spec : specs) {
        double avg = 0, in_total = 0, out_total = 0;
        for (const auto& r : rows)
            if (r.ok && r.variant == cts::variantName(spec.variant) && r.depth == spec.depth) {
                in_total += double(r.input_bytes);
                out_total += double(r.output_bytes);
            }
        if (in_total > 0) avg = 8.0 * out_total / in_total;
        std::cerr << cts::variantName(spec.variant) << ":" << spec.depth
                  << " weighted average " << avg << " bpb\n";
    }

    bool all_ok = true;
    for (const auto& r : rows)
        if (!r.ok) {
            std::cerr << r.file << " " << r.variant << ":" << r.depth
                      << " failed its round trip\n";
            all_ok = false;
        }
    if (!all_ok) return kExitIntegrity;

    if (!baseline_path.empty()) {
        std::vector<cts::BaselineEntry> base;
        try {
            base = cts::readBaselineCsv(baseline_path);
        } catch (const std::runtime_error& e) {
            std::cerr << e.what() << "\n";
            return kExitIo;
        }
        auto rep = cts::compareBaseline(rows, base);
        std::cerr << "baseline: " << rep.checked << " rates checked, "
                  << rep.failures.size() << " outside tolerance\n";
        for (const auto& f : rep.failures) std::cerr << "  " << f << "\n";
        if (!rep.pass()) return kExitBaseline;
    }
    return 0;
}

// ---- self test ------------------------------------------------------------

bool selftestTreesMatchDirectSums() {
    std::mt19937_64 seeds(1);
    for (int depth = 0; depth <= 2; ++depth) {
        for (int rep = 0; rep < 20; ++rep) {
            int n = 1 + int(seeds() % 12);
            std::vector<int> x(size_t(n), 0);
            for (auto& b : x) b = int(seeds() & 1);
            cts::NodeArena arena;
            cts::ContextTree tree(cts::ModelConfig::ctw(depth), arena);
            for (int b : x) tree.update(b);
            if (std::abs(tree.logProb() - cts::oracle::bruteCtwLogProb(x, depth)) > 1e-9)
                return false;
        }
    }
    for (int depth = 0; depth <= 1; ++depth) {
        for (int rep = 0; rep < 20; ++rep) {
            int n = 1 + int(seeds() % 8);
            std::vector<int> x(size_t(n), 0);
            for (auto& b : x) b = int(seeds() & 1);
            cts::NodeArena arena;
            cts::ContextTree tree(cts::ModelConfig::cts(depth), arena);
            for (int b : x) tree.update(b);
            if (std::abs(tree.logProb() - cts::oracle::bruteCtsLogProb(x, depth)) > 1e-9)
                return false;
        }
    }
    return true;
}

bool selftestSwitchMatchesDirectSum() {
    std::mt19937_64 seeds(2);
    std::uniform_real_distribution<double> unif(0.05, 0.95);
    std::mt19937_64 rng(3);
    for (int n_models : {2, 3}) {
        for (int rep = 0; rep < 10; ++rep) {
            int n = 1 + int(seeds() % 7);
            std::vector<std::vector<double>> cond(size_t(n_models),
                                                  std::vector<double>(size_t(n), 0.0));
            for (auto& rowv : cond)
                for (auto& p : rowv) p = unif(rng);
            cts::SwitchEnsemble ens(n_models, cts::decayingSwitchRate);
            for (int k = 0; k < n; ++k) {
                std::vector<double> step(size_t(n_models), 0.0);
                for (int j = 0; j < n_models; ++j) step[size_t(j)] = cond[size_t(j)][size_t(k)];
                ens.step(step);
            }
            double want = double(std::log2(cts::oracle::bruteSwitchProb(
                cond, cts::decayingSwitchRate)));
            if (std::abs(ens.logProb() - want) > 1e-9) return false;
        }
    }
    return true;
}

bool selftestCodecRoundTrips() {
    std::mt19937_64 rng(4);
    const std::vector<cts::ModelConfig> cfgs = {
        cts::ModelConfig::ctw(16), cts::ModelConfig::cts(16),
        cts::ModelConfig::ctsStar(16), cts::ModelConfig::cts(4)};
    for (const auto& cfg : cfgs) {
        for (int rep = 0; rep < 5; ++rep) {
            size_t n = rng() % 800;
            std::vector<uint8_t> input(n);
            bool structured = rep % 2 == 0;
            for (size_t i = 0; i < n; ++i)
                input[i] = structured ? uint8_t("abcab"[i % 5]) : uint8_t(rng());
            auto packed = cts::compress(input, cfg);
            if (cts::decompress(packed) != input) return false;
        }
    }
    return true;
}

int runSelftest() {
    struct Entry {
        const char* name;
        bool (*fn)();
    };
    const Entry entries[] = {
        {"context trees match their direct sums", selftestTreesMatchDirectSums},
        {"switch ensemble matches its direct sum", selftestSwitchMatchesDirectSum},
        {"containers round trip", selftestCodecRoundTrips},
    };
    bool all = true;
    for (const auto& e : entries) {
        bool ok = e.fn();
        std::cout << (ok ? "ok   " : "FAIL ") << e.name << "\n";
        all = all && ok;
    }
    std::cout << (all ? "self test passed\n" : "self test FAILED\n");
    return all ? 0 : kExitIntegrity;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"context-tree compressor"};
    app.require_subcommand(1);

    std::string in_path, out_path;
    std::string variant_name = "cts";
    int depth = 48;

    auto* c = app.add_subcommand("compress", "compress one file");
    c->add_option("-i,--input", in_path, "input file")->required();
    c->add_option("-o,--output", out_path, "output file")->required();
    c->add_option("--variant", variant_name, "ctw, cts, or cts-star");
    c->add_option("--depth", depth, "context depth in bits");

    auto* d = app.add_subcommand("decompress", "decompress one file");
    d->add_option("-i,--input", in_path, "input file")->required();
    d->add_option("-o,--output", out_path, "output file")->required();

    std::string bench_dir = "data/calgary";
    std::string csv_out, baseline_path;
    std::vector<std::string> spec_texts;
    auto* b = app.add_subcommand("bench", "benchmark a corpus directory");
    b->add_option("--dir", bench_dir, "corpus directory");
    b->add_option("--out", csv_out, "write results csv here (default stdout)");
    b->add_option("--check", baseline_path, "baseline csv to compare against");
    b->add_option("--spec", spec_texts, "variant:depth rows to run (repeatable)");

    auto* s = app.add_subcommand("selftest", "cross-check the incremental models");
    (void)s;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (c->parsed()) return runCompress(in_path, out_path, variant_name, depth);
        if (d->parsed()) return runDecompress(in_path, out_path);
        if (b->parsed()) return runBench(bench_dir, csv_out, baseline_path, spec_texts);
        return runSelftest();
    } catch (const std::bad_alloc&) {
        std::cerr << "out of memory\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitIo;
    }
}
