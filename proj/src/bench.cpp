#include "cts/bench.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cts/codec.hpp"

namespace cts {

namespace {

std::string baseName(const std::string& path) {
    size_t slash = path.find_last_of('/');
    return slash == std::string::npos ? path : path.substr(slash + 1);
}

ModelConfig presetFor(const RunSpec& spec) {
    switch (spec.variant) {
    case Variant::CTW: return ModelConfig::ctw(spec.depth);
    case Variant::CTS: return ModelConfig::cts(spec.depth);
    case Variant::CTS_STAR: return ModelConfig::ctsStar(spec.depth);
    }
    throw std::invalid_argument("unknown variant");
}

} // namespace

std::vector<uint8_t> readFileBytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<uint8_t> data((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
    if (in.bad()) throw std::runtime_error("read failed on " + path);
    return data;
}

void writeFileBytes(const std::string& path, const std::vector<uint8_t>& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot create " + path);
    out.write(reinterpret_cast<const char*>(data.data()), std::streamsize(data.size()));
    if (!out) throw std::runtime_error("write failed on " + path);
}

std::vector<FileResult> runCorpus(const std::vector<std::string>& paths,
                                  const std::vector<RunSpec>& specs) {
    std::vector<FileResult> rows(paths.size() * specs.size());

#pragma omp parallel for schedule(dynamic, 1)
    for (long fi = 0; fi < long(paths.size()); ++fi) {
        std::vector<uint8_t> input = readFileBytes(paths[size_t(fi)]);
        for (size_t si = 0; si < specs.size(); ++si) {
            const RunSpec& spec = specs[si];
            FileResult& row = rows[size_t(fi) * specs.size() + si];
            row.file = baseName(paths[size_t(fi)]);
            row.variant = variantName(spec.variant);
            row.depth = spec.depth;
            row.input_bytes = input.size();

            auto t0 = std::chrono::steady_clock::now();
            std::vector<uint8_t> packed = compress(input, presetFor(spec));
            auto t1 = std::chrono::steady_clock::now();

            row.output_bytes = packed.size();
            row.elapsed_s = std::chrono::duration<double>(t1 - t0).count();
            row.bpb = input.empty() ? 0.0
                                    : 8.0 * double(packed.size()) / double(input.size());
            row.ok = decompress(packed) == input;
        }
    }
    return rows;
}

double weightedAverage(const std::vector<FileResult>& rows) {
    double in_total = 0, out_total = 0;
    for (const auto& r : rows) {
        if (!r.ok) continue;
        in_total += double(r.input_bytes);
        out_total += double(r.output_bytes);
    }
    return in_total > 0 ? 8.0 * out_total / in_total : 0.0;
}

void writeCsv(std::ostream& out, const std::vector<FileResult>& rows) {
    out << "file,variant,depth,input_bytes,output_bytes,bpb,elapsed_s\n";
    for (const auto& r : rows) {
        out << r.file << ',' << r.variant << ',' << r.depth << ',' << r.input_bytes
            << ',' << r.output_bytes << ',' << std::fixed << std::setprecision(6)
            << r.bpb << ',' << std::setprecision(3) << r.elapsed_s << '\n';
        out.unsetf(std::ios::fixed);
    }
}

std::vector<BaselineEntry> readBaselineCsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<BaselineEntry> out;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) { // header
            first = false;
            continue;
        }
        std::istringstream ss(line);
        BaselineEntry e;
        std::string depth, bpb, tol;
        if (!std::getline(ss, e.file, ',') || !std::getline(ss, e.variant, ',') ||
            !std::getline(ss, depth, ',') || !std::getline(ss, bpb, ',') ||
            !std::getline(ss, tol))
            throw std::runtime_error("malformed baseline row: " + line);
        e.depth = std::stoi(depth);
        e.bpb = std::stod(bpb);
        e.tol = std::stod(tol);
        out.push_back(e);
    }
    return out;
}

CompareReport compareBaseline(const std::vector<FileResult>& rows,
                              const std::vector<BaselineEntry>& baseline) {
    CompareReport rep;
    for (const auto& e : baseline) {
        const FileResult* match = nullptr;
        for (const auto& r : rows)
            if (r.file == e.file && r.variant == e.variant && r.depth == e.depth) {
                match = &r;
                break;
            }
        if (!match) continue;
        ++rep.checked;
        std::ostringstream msg;
        if (!match->ok) {
            msg << e.file << ' ' << e.variant << ':' << e.depth << " failed its round trip";
            rep.failures.push_back(msg.str());
        } else if (std::abs(match->bpb - e.bpb) > e.tol) {
            msg << e.file << ' ' << e.variant << ':' << e.depth << " rate "
                << std::fixed << std::setprecision(4) << match->bpb << " outside "
                << std::setprecision(2) << e.bpb << " +/- " << e.tol;
            rep.failures.push_back(msg.str());
        }
    }
    return rep;
}

} // namespace cts
