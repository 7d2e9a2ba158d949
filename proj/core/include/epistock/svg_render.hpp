#ifndef EPISTOCK_SVG_RENDER_HPP_
#define EPISTOCK_SVG_RENDER_HPP_

#include <iosfwd>
#include <string>

#include "epistock/sweep.hpp"

namespace epistock {

enum class HeatmapChannel {
  InfectedRatioMean,
  Outcome,
  UnservedMean,
};

std::string to_string(HeatmapChannel ch);
HeatmapChannel channel_from_string(const std::string& s);

/// Fixed palette of the outcome channel.
inline constexpr const char* kOutcomeRedColor = "#c0392b";
inline constexpr const char* kOutcomeWhiteColor = "#ffffff";
inline constexpr const char* kOutcomeBlueColor = "#2e6da4";

/// Writes a standalone SVG 1.1 heatmap: one rect per grid cell, axes
/// labeled with the swept parameter names and ranges. The outcome channel
/// uses the fixed red/white/blue palette with an A/B glyph on white cells;
/// continuous channels use a two-stop blue-to-red map with a min/max
/// legend. Output is deterministic (no timestamps or generated ids).
void render_heatmap_svg(const SweepResult& res, HeatmapChannel channel,
                        std::ostream& sink);

}  // namespace epistock

#endif  // EPISTOCK_SVG_RENDER_HPP_
