#pragma once

#include "aq/quant.hpp"
#include "aq/tensor.hpp"

namespace aq::ref {

// Serial counterparts of the vectorized kernels. They process one channel at
// a time with plain scalar loops — the conventional per-channel code path the
// fast kernels are tested against, and the parameter-computation step of the
// in-loop benchmark baseline.

ChannelMinMax channel_min_max_serial(const DecomposedView& v);

/// Per-channel scalar loop: scans each channel's elements one by one, then
/// derives that channel's scale/zero-point before moving to the next channel.
QuantParams params_channelwise_serial(const DecomposedView& v, int bits);

QuantizedActivation quantize_serial(const ActivationTensor& a, const QuantParams& p);

ActivationTensor dequantize_prescale_serial(const QuantizedActivation& q);

} // namespace aq::ref
