#pragma once

#include <string_view>

#include "aq/errors.hpp"

namespace aq {

/// The three quantization strategies under comparison. The two channel-wise
/// entries share parameters and reconstruction; they differ in where the
/// per-channel scale is applied during accumulation.
enum class Strategy { LayerWise, ChannelWiseInLoop, ChannelWisePrescaled };

constexpr std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::LayerWise: return "layerwise";
        case Strategy::ChannelWiseInLoop: return "inloop";
        case Strategy::ChannelWisePrescaled: return "prescaled";
    }
    return "?";
}

inline Strategy strategy_from_string(std::string_view s) {
    if (s == "layerwise") return Strategy::LayerWise;
    if (s == "inloop") return Strategy::ChannelWiseInLoop;
    if (s == "prescaled") return Strategy::ChannelWisePrescaled;
    throw ParamError("unknown strategy '" + std::string(s) +
                     "' (expected layerwise, inloop or prescaled)");
}

} // namespace aq
