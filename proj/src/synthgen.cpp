#include "aq/synthgen.hpp"

#include <cmath>
#include <numbers>

#include "aq/errors.hpp"

namespace aq {

namespace {

double standard_normal(SplitMix64& rng) {
    const double u1 = 1.0 - rng.next_double(); // (0, 1], keeps log finite
    const double u2 = rng.next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace

ActivationTensor generate(const GenSpec& spec) {
    const Shape4& s = spec.shape;
    if (s.n < 1 || s.c < 1 || s.h < 1 || s.w < 1) {
        throw ParamError("generator shape must have all dims >= 1");
    }
    if (!(spec.channel_spread >= 1.0)) {
        throw ParamError("channel_spread must be >= 1");
    }
    if (!(spec.skew >= 0.0)) {
        throw ParamError("skew must be >= 0");
    }

    SplitMix64 rng(spec.seed);

    std::vector<double> factor(s.c);
    const double log_spread = std::log(spec.channel_spread);
    for (std::uint32_t c = 0; c < s.c; ++c) {
        factor[c] = std::exp(log_spread * rng.next_double());
    }

    const std::size_t hw = s.spatial();
    std::vector<float> data(s.volume());
    std::size_t i = 0;
    for (std::uint32_t n = 0; n < s.n; ++n) {
        for (std::uint32_t c = 0; c < s.c; ++c) {
            for (std::size_t k = 0; k < hw; ++k, ++i) {
                const double z = standard_normal(rng);
                const double v = spec.skew > 0.0 ? std::expm1(spec.skew * z) / spec.skew : z;
                double x = factor[c] * v;
                if (spec.nonneg && x < 0.0) {
                    x = 0.0;
                }
                data[i] = float(x);
            }
        }
    }
    return ActivationTensor(s, std::move(data));
}

std::vector<GenSpec> resnet20_shape_preset(std::uint64_t base_seed) {
    struct Stage {
        std::uint32_t channels;
        std::uint32_t spatial;
        int sites;
    };
    constexpr Stage stages[] = {{16, 32, 7}, {32, 16, 6}, {64, 8, 6}};

    SplitMix64 seeder(base_seed);
    std::vector<GenSpec> specs;
    specs.reserve(19);
    for (const Stage& st : stages) {
        for (int i = 0; i < st.sites; ++i) {
            GenSpec g;
            g.seed = seeder.next();
            g.shape = Shape4{16, st.channels, st.spatial, st.spatial};
            g.channel_spread = 8.0;
            g.skew = 0.3;
            g.nonneg = true;
            specs.push_back(g);
        }
    }
    return specs;
}

} // namespace aq
