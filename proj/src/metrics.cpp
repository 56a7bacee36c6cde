#include "aq/metrics.hpp"

#include <cmath>
#include <string>

#include "aq/quant.hpp"

namespace aq {

namespace {

void check_lengths(std::span<const float> x, std::span<const float> q) {
    if (x.size() != q.size()) {
        throw ShapeError("metric inputs differ in length: " + std::to_string(x.size()) + " vs " +
                         std::to_string(q.size()));
    }
    if (x.empty()) {
        throw ParamError("metric inputs must be nonempty");
    }
}

} // namespace

double cosine_similarity(std::span<const float> x, std::span<const float> q) {
    check_lengths(x, q);
    double dot = 0.0;
    double xx = 0.0;
    double qq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        dot += double(x[i]) * double(q[i]);
        xx += double(x[i]) * double(x[i]);
        qq += double(q[i]) * double(q[i]);
    }
    if (xx == 0.0 && qq == 0.0) {
        throw MetricError("cosine similarity undefined for two all-zero vectors");
    }
    if (xx == 0.0 || qq == 0.0) {
        return 0.0;
    }
    return dot / (std::sqrt(xx) * std::sqrt(qq));
}

double relative_error(std::span<const float> x, std::span<const float> q) {
    check_lengths(x, q);
    double diff2 = 0.0;
    double ref2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = double(x[i]) - double(q[i]);
        diff2 += d * d;
        ref2 += double(x[i]) * double(x[i]);
    }
    if (ref2 == 0.0) {
        throw MetricError("relative error undefined for a zero reference norm");
    }
    return std::sqrt(diff2) / std::sqrt(ref2);
}

double skewness(std::span<const float> x) {
    if (x.size() < 2) {
        throw ParamError("skewness needs at least two values");
    }
    double mean = 0.0;
    for (float v : x) {
        mean += double(v);
    }
    mean /= double(x.size());
    double m2 = 0.0;
    double m3 = 0.0;
    for (float v : x) {
        const double d = double(v) - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= double(x.size());
    m3 /= double(x.size());
    if (m2 == 0.0) {
        throw MetricError("skewness undefined for zero variance");
    }
    return m3 / std::pow(m2, 1.5);
}

DistortionReport profile_layers(std::span<const ActivationTensor> layers, int bits, Strategy s) {
    if (layers.empty()) {
        throw ParamError("profile_layers needs at least one layer");
    }
    DistortionReport report;
    report.strategy = s;
    report.per_layer.reserve(layers.size());
    double cos_sum = 0.0;
    double err_sum = 0.0;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const ActivationTensor& layer = layers[i];
        const Granularity g =
            s == Strategy::LayerWise ? Granularity::LayerWise : Granularity::ChannelWise;
        const ActivationTensor recon = fake_quantize_ste_forward(layer, bits, g);
        const double err = relative_error(layer.values(), recon.values());
        cos_sum += cosine_similarity(layer.values(), recon.values());
        err_sum += err;
        report.per_layer.emplace_back(int(i), err);
    }
    report.cosine = cos_sum / double(layers.size());
    report.rel_error = err_sum / double(layers.size());
    return report;
}

} // namespace aq
