#include "aq/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "aq/errors.hpp"
#include "aq/reference.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#ifdef __GLIBC__
#include <malloc.h>
#endif

namespace aq {

namespace {

// Keeps the optimizer from discarding a pipeline result.
inline void sink(const void* p) {
    asm volatile("" : : "g"(p) : "memory");
}

// Keep multi-megabyte tensor buffers on the heap across iterations; without
// this glibc serves them via mmap/munmap and every iteration of every
// strategy pays page faults instead of measuring kernel time.
void tune_allocator_once() {
#ifdef __GLIBC__
    [[maybe_unused]] static const bool done = [] {
        mallopt(M_MMAP_THRESHOLD, 256 << 20);
        mallopt(M_TRIM_THRESHOLD, 256 << 20);
        return true;
    }();
#endif
}

int kernel_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

ChannelWeights make_weights(std::size_t channels, std::uint64_t seed) {
    SplitMix64 rng(seed ^ 0xA5A5A5A55A5A5A5Aull);
    std::vector<float> v(channels * channels);
    for (float& x : v) {
        x = float(rng.next_uniform(-1.0, 1.0));
    }
    return ChannelWeights(channels, channels, std::move(v));
}

// One full data-conversion pass plus one accumulation for a single layer.
void run_pipeline(Strategy strategy, const ActivationTensor& input, const ChannelWeights& w,
                  int bits) {
    switch (strategy) {
        case Strategy::LayerWise: {
            const QuantParams p = params_layerwise(input, bits);
            const QuantizedActivation q = quantize(input, p);
            const ActivationTensor recon = dequantize_prescale(q);
            sink(recon.values().data());
            const OutputVector y = accumulate_layerwise(q, w);
            sink(y.values.data());
            break;
        }
        case Strategy::ChannelWisePrescaled: {
            const QuantParams p = params_channelwise(decompose(input), bits);
            const QuantizedActivation q = quantize(input, p);
            // accumulate_prescaled materializes the pre-scaled activations
            // internally, so the dequantize/pre-scale pass is timed exactly once.
            const OutputVector y = accumulate_prescaled(q, w);
            sink(y.values.data());
            break;
        }
        case Strategy::ChannelWiseInLoop: {
            const QuantParams p = ref::params_channelwise_serial(decompose(input), bits);
            const QuantizedActivation q = quantize(input, p);
            const OutputVector y = accumulate_inloop(q, w);
            sink(y.values.data());
            break;
        }
    }
}

void assert_paths_agree(const ActivationTensor& input, const ChannelWeights& w, int bits) {
    const QuantParams p = params_channelwise(decompose(input), bits);
    const QuantizedActivation q = quantize(input, p);
    const OutputVector a = accumulate_inloop(q, w);
    const OutputVector b = accumulate_prescaled(q, w);
    const double dev = max_rel_deviation(a, b);
    if (!(dev <= 1e-5)) {
        throw CheckError("in-loop and pre-scaled outputs deviate by " + std::to_string(dev));
    }
}

struct LayerInput {
    ActivationTensor tensor;
    ChannelWeights weights;
};

BenchRecord measure(Strategy strategy, std::span<const LayerInput> layers, int bits, int warmup,
                    int iters, Shape4 record_shape) {
    if (iters < 10) {
        throw ParamError("measure_iters must be >= 10");
    }
    if (warmup < 0) {
        throw ParamError("warmup must be >= 0");
    }
    tune_allocator_once();
    if (strategy == Strategy::ChannelWisePrescaled) {
        for (const LayerInput& li : layers) {
            assert_paths_agree(li.tensor, li.weights, bits);
        }
    }

    using clock = std::chrono::steady_clock;
    std::vector<std::int64_t> samples;
    samples.reserve(std::size_t(iters));
    for (int it = 0; it < warmup + iters; ++it) {
        const auto t0 = clock::now();
        for (const LayerInput& li : layers) {
            run_pipeline(strategy, li.tensor, li.weights, bits);
        }
        const auto t1 = clock::now();
        if (it >= warmup) {
            samples.push_back(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
        }
    }
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    const auto rank = [n](int pct) { return (std::size_t(pct) * (n - 1) + 50) / 100; };

    BenchRecord r;
    r.strategy = strategy;
    r.shape = record_shape;
    r.bits = bits;
    r.warmup_iters = warmup;
    r.measure_iters = iters;
    r.median_ns = samples[rank(50)];
    r.mean_ns = std::accumulate(samples.begin(), samples.end(), std::int64_t{0}) / std::int64_t(n);
    r.p10_ns = samples[rank(10)];
    r.p90_ns = samples[rank(90)];
    r.threads = kernel_threads();
    return r;
}

} // namespace

double max_rel_deviation(const OutputVector& a, const OutputVector& b) {
    if (a.out_units != b.out_units || a.positions != b.positions) {
        throw ShapeError("output vectors differ in shape");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double va = a.values[i];
        const double vb = b.values[i];
        const double denom = std::max({std::abs(va), std::abs(vb), 1.0});
        worst = std::max(worst, std::abs(va - vb) / denom);
    }
    return worst;
}

BenchRecord bench_quantization(const GenSpec& spec, int bits, Strategy strategy, int warmup,
                               int iters) {
    detail::check_bits(bits);
    std::vector<LayerInput> layers;
    layers.push_back(LayerInput{generate(spec), make_weights(spec.shape.c, spec.seed)});
    return measure(strategy, layers, bits, warmup, iters, spec.shape);
}

BenchRecord bench_preset(int batch, int bits, Strategy strategy, int warmup, int iters,
                         std::uint64_t seed) {
    detail::check_bits(bits);
    if (batch < 1) {
        throw ParamError("batch must be >= 1");
    }
    std::vector<LayerInput> layers;
    for (GenSpec spec : resnet20_shape_preset(seed)) {
        spec.shape.n = std::uint32_t(batch);
        layers.push_back(LayerInput{generate(spec), make_weights(spec.shape.c, spec.seed)});
    }
    return measure(strategy, layers, bits, warmup, iters,
                   Shape4{std::uint32_t(batch), 0, 0, 0});
}

std::vector<BenchRecord> bench_sweep(std::span<const int> batches, int bits, int warmup, int iters,
                                     std::uint64_t seed) {
    if (batches.empty()) {
        throw ParamError("batch list must be nonempty");
    }
    std::vector<BenchRecord> records;
    records.reserve(batches.size() * 3);
    for (Strategy s :
         {Strategy::LayerWise, Strategy::ChannelWiseInLoop, Strategy::ChannelWisePrescaled}) {
        for (int batch : batches) {
            records.push_back(bench_preset(batch, bits, s, warmup, iters, seed));
        }
    }
    return records;
}

std::string csv_header() {
    return "strategy,n,c,h,w,bits,warmup,iters,median_ns,mean_ns,p10_ns,p90_ns";
}

std::string to_csv_row(const BenchRecord& r) {
    std::ostringstream os;
    os << to_string(r.strategy) << ',' << r.shape.n << ',' << r.shape.c << ',' << r.shape.h << ','
       << r.shape.w << ',' << r.bits << ',' << r.warmup_iters << ',' << r.measure_iters << ','
       << r.median_ns << ',' << r.mean_ns << ',' << r.p10_ns << ',' << r.p90_ns;
    return os.str();
}

void write_csv(std::ostream& os, std::span<const BenchRecord> records,
               const std::string& provenance) {
    if (!provenance.empty()) {
        os << "# " << provenance << '\n';
    }
    os << csv_header() << '\n';
    for (const BenchRecord& r : records) {
        os << to_csv_row(r) << '\n';
    }
}

std::vector<BenchRecord> parse_csv(std::istream& is) {
    std::vector<BenchRecord> records;
    std::string line;
    bool saw_header = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!saw_header) {
            if (line != csv_header()) {
                throw IoError("unexpected CSV header: " + line);
            }
            saw_header = true;
            continue;
        }
        std::istringstream row(line);
        std::string field;
        BenchRecord r;
        std::getline(row, field, ',');
        r.strategy = strategy_from_string(field);
        const auto next_int = [&row, &field]() {
            if (!std::getline(row, field, ',')) {
                throw IoError("short CSV row");
            }
            return std::stoll(field);
        };
        r.shape.n = std::uint32_t(next_int());
        r.shape.c = std::uint32_t(next_int());
        r.shape.h = std::uint32_t(next_int());
        r.shape.w = std::uint32_t(next_int());
        r.bits = int(next_int());
        r.warmup_iters = int(next_int());
        r.measure_iters = int(next_int());
        r.median_ns = next_int();
        r.mean_ns = next_int();
        r.p10_ns = next_int();
        r.p90_ns = next_int();
        records.push_back(r);
    }
    if (!saw_header) {
        throw IoError("CSV input has no header row");
    }
    return records;
}

} // namespace aq
