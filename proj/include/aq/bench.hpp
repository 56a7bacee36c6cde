#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "aq/accumulate.hpp"
#include "aq/strategy.hpp"
#include "aq/synthgen.hpp"

namespace aq {

/// One latency measurement. Statistics are nearest-rank order statistics in
/// nanoseconds over the measured iterations. `threads` records how many
/// parallel lanes the kernels under test could use (1 = fully serial run).
/// Records covering the whole ResNet-20 ladder instead of a single tensor
/// carry shape (batch, 0, 0, 0).
struct BenchRecord {
    Strategy strategy = Strategy::LayerWise;
    Shape4 shape;
    int bits = 3;
    int warmup_iters = 0;
    int measure_iters = 0;
    std::int64_t median_ns = 0;
    std::int64_t mean_ns = 0;
    std::int64_t p10_ns = 0;
    std::int64_t p90_ns = 0;
    int threads = 1;
};

/// Largest |a - b| / max(|a|, |b|, 1) over all output elements.
double max_rel_deviation(const OutputVector& a, const OutputVector& b);

/// Times the full data-conversion pipeline for one synthetic tensor:
/// parameter computation, quantization, reconstruction/pre-scaling and one
/// accumulation pass (square weights, M = C). The in-loop baseline computes
/// its parameters with the per-channel scalar loop and defers scaling into
/// the accumulation; the other strategies use the vectorized kernels.
/// Inputs are generated once, outside the timed region. Before timing a
/// pre-scaled run, the harness recomputes the in-loop output and asserts the
/// two paths agree within 1e-5.
BenchRecord bench_quantization(const GenSpec& spec, int bits, Strategy strategy, int warmup = 5,
                               int iters = 50);

/// Same pipeline applied to all 19 layers of the ResNet-20 shape ladder per
/// iteration, batch overridden to `batch`. Shape in the record is
/// (batch, 0, 0, 0).
BenchRecord bench_preset(int batch, int bits, Strategy strategy, int warmup = 5, int iters = 50,
                         std::uint64_t seed = 42);

/// One bench_preset record per (strategy, batch) pair, strategy-major in
/// enum order (layerwise, inloop, prescaled), batches in the given order.
/// All strategies at a given batch consume bit-identical inputs.
std::vector<BenchRecord> bench_sweep(std::span<const int> batches, int bits, int warmup = 5,
                                     int iters = 50, std::uint64_t seed = 42);

// CSV schema used by the CLI:
//   strategy,n,c,h,w,bits,warmup,iters,median_ns,mean_ns,p10_ns,p90_ns
// LF line endings. Lines starting with '#' are provenance comments.
std::string csv_header();
std::string to_csv_row(const BenchRecord& r);
void write_csv(std::ostream& os, std::span<const BenchRecord> records,
               const std::string& provenance);
std::vector<BenchRecord> parse_csv(std::istream& is);

} // namespace aq
