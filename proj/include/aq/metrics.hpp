#pragma once

#include <span>
#include <utility>
#include <vector>

#include "aq/strategy.hpp"
#include "aq/tensor.hpp"

namespace aq {

/// Distortion summary for one strategy over a list of layers. `cosine` and
/// `rel_error` are unweighted means over layers; `per_layer` carries the
/// per-layer relative errors.
struct DistortionReport {
    double cosine = 0.0;
    double rel_error = 0.0;
    std::vector<std::pair<int, double>> per_layer;
    Strategy strategy = Strategy::ChannelWisePrescaled;
};

/// X.Q / (||X|| ||Q||), accumulated in double. If exactly one side is
/// all-zero returns 0; both sides all-zero is a MetricError.
double cosine_similarity(std::span<const float> x, std::span<const float> q);

/// ||X - Q|| / ||X||, accumulated in double. Zero reference norm is a
/// MetricError.
double relative_error(std::span<const float> x, std::span<const float> q);

/// Population skewness m3 / m2^(3/2) with central moments m_k = mean((x-mu)^k).
/// Needs at least two values and nonzero variance.
double skewness(std::span<const float> x);

/// Quantizes and reconstructs every layer at the given bit-width under the
/// strategy's granularity, then reports per-layer relative error and the
/// layer means of cosine similarity and relative error.
DistortionReport profile_layers(std::span<const ActivationTensor> layers, int bits, Strategy s);

} // namespace aq
