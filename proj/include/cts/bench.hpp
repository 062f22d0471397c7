// corpus benchmark harness: run each (variant, depth) setting over a list of
// files, verify every round trip, and compare rates against a baseline table.
// files are processed in parallel (one model per file); rows come back in a
// deterministic order regardless of scheduling.

#ifndef __CTS_BENCH_HPP__
#define __CTS_BENCH_HPP__

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cts/model.hpp"

namespace cts {

struct RunSpec {
    Variant variant;
    int depth;
};

struct FileResult {
    std::string file; // base name
    std::string variant;
    int depth = 0;
    uint64_t input_bytes = 0;
    uint64_t output_bytes = 0; // whole container, header included
    double bpb = 0.0;
    double elapsed_s = 0.0; // compression time
    bool ok = false;        // decompress(compress(x)) == x
};

// one expected rate, with its own comparison tolerance
struct BaselineEntry {
    std::string file;
    std::string variant;
    int depth = 0;
    double bpb = 0.0;
    double tol = 0.0;
};

struct CompareReport {
    int checked = 0; // baseline entries that had a matching result row
    std::vector<std::string> failures;
    bool pass() const { return failures.empty(); }
};

std::vector<uint8_t> readFileBytes(const std::string& path);
void writeFileBytes(const std::string& path, const std::vector<uint8_t>& data);

std::vector<FileResult> runCorpus(const std::vector<std::string>& paths,
                                  const std::vector<RunSpec>& specs);

// corpus-weighted rate: 8 * total output bytes / total input bytes, over
// verified rows only
double weightedAverage(const std::vector<FileResult>& rows);

void writeCsv(std::ostream& out, const std::vector<FileResult>& rows);

// baseline format: header line, then file,variant,depth,bpb,tol
std::vector<BaselineEntry> readBaselineCsv(const std::string& path);

// checks every baseline entry that has a matching result row; rows that
// failed their round trip count as failures outright
CompareReport compareBaseline(const std::vector<FileResult>& rows,
                              const std::vector<BaselineEntry>& baseline);

} // namespace cts

#endif
