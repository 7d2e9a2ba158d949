#include "epistock/svg_render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace epistock {

namespace {

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[40];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string lerp_color(double t) {
  // Two-stop linear map from the blue to the red of the outcome palette.
  const int r0 = 0x2e, g0 = 0x6d, b0 = 0xa4;
  const int r1 = 0xc0, g1 = 0x39, b1 = 0x2b;
  const double u = std::clamp(t, 0.0, 1.0);
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                static_cast<int>(std::lround(r0 + u * (r1 - r0))),
                static_cast<int>(std::lround(g0 + u * (g1 - g0))),
                static_cast<int>(std::lround(b0 + u * (b1 - b0))));
  return buf;
}

double channel_value(const PhasePoint& pt, HeatmapChannel ch) {
  switch (ch) {
    case HeatmapChannel::InfectedRatioMean:
      return pt.summary.infected_ratio_mean;
    case HeatmapChannel::UnservedMean:
      return 0.5 * (pt.summary.unserved_ratio_a + pt.summary.unserved_ratio_b);
    case HeatmapChannel::Outcome:
      return 0.0;
  }
  return 0.0;
}

}  // namespace

std::string to_string(HeatmapChannel ch) {
  switch (ch) {
    case HeatmapChannel::InfectedRatioMean:
      return "infected_ratio_mean";
    case HeatmapChannel::Outcome:
      return "outcome";
    case HeatmapChannel::UnservedMean:
      return "unserved_mean";
  }
  return "outcome";
}

HeatmapChannel channel_from_string(const std::string& s) {
  if (s == "infected_ratio_mean") return HeatmapChannel::InfectedRatioMean;
  if (s == "outcome") return HeatmapChannel::Outcome;
  if (s == "unserved_mean") return HeatmapChannel::UnservedMean;
  throw std::invalid_argument("unknown heatmap channel: " + s);
}

void render_heatmap_svg(const SweepResult& res, HeatmapChannel channel,
                        std::ostream& sink) {
  if (res.points.empty()) {
    throw std::invalid_argument("cannot render an empty sweep result");
  }
  const std::size_t nx = std::max<std::size_t>(res.axis_x.steps, 1);
  const std::size_t ny = std::max<std::size_t>(res.axis_y.steps, 1);
  if (res.points.size() != nx * ny) {
    throw std::invalid_argument("sweep result grid does not match its axes");
  }

  const double plot_w = 520.0, plot_h = 420.0;
  const double margin_left = 70.0, margin_bottom = 50.0, margin_top = 30.0,
               margin_right = channel == HeatmapChannel::Outcome ? 30.0 : 90.0;
  const double width = margin_left + plot_w + margin_right;
  const double height = margin_top + plot_h + margin_bottom;
  const double cell_w = plot_w / static_cast<double>(nx);
  const double cell_h = plot_h / static_cast<double>(ny);

  double lo = 0.0, hi = 1.0;
  if (channel != HeatmapChannel::Outcome) {
    lo = channel_value(res.points.front(), channel);
    hi = lo;
    for (const auto& pt : res.points) {
      const double v = channel_value(pt, channel);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi <= lo) hi = lo + 1e-12;
  }

  sink << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
       << fmt(width) << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 "
       << fmt(width) << " " << fmt(height) << "\">\n"
       << "<title>" << to_string(channel) << "</title>\n";

  // Cells: grid row iy=0 is the axis minimum, drawn at the bottom.
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const PhasePoint& pt = res.points[iy * nx + ix];
      const double x = margin_left + static_cast<double>(ix) * cell_w;
      const double y = margin_top + plot_h - static_cast<double>(iy + 1) * cell_h;
      std::string fill;
      if (channel == HeatmapChannel::Outcome) {
        switch (pt.outcome) {
          case OutcomeClass::Red:
            fill = kOutcomeRedColor;
            break;
          case OutcomeClass::Blue:
            fill = kOutcomeBlueColor;
            break;
          default:
            fill = kOutcomeWhiteColor;
            break;
        }
      } else {
        fill = lerp_color((channel_value(pt, channel) - lo) / (hi - lo));
      }
      sink << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\""
           << fmt(cell_w) << "\" height=\"" << fmt(cell_h) << "\" fill=\""
           << fill << "\"/>\n";
      if (channel == HeatmapChannel::Outcome &&
          (pt.outcome == OutcomeClass::WhiteA ||
           pt.outcome == OutcomeClass::WhiteB)) {
        sink << "<text x=\"" << fmt(x + 0.5 * cell_w) << "\" y=\""
             << fmt(y + 0.5 * cell_h) << "\" font-size=\""
             << fmt(std::min(cell_w, cell_h) * 0.7)
             << "\" text-anchor=\"middle\" dominant-baseline=\"central\" fill=\""
             << kOutcomeRedColor << "\">"
             << (pt.outcome == OutcomeClass::WhiteA ? "A" : "B") << "</text>\n";
      }
    }
  }

  // Frame and axis labels.
  sink << "<rect x=\"" << fmt(margin_left) << "\" y=\"" << fmt(margin_top)
       << "\" width=\"" << fmt(plot_w) << "\" height=\"" << fmt(plot_h)
       << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
  sink << "<text x=\"" << fmt(margin_left + 0.5 * plot_w) << "\" y=\""
       << fmt(height - 12.0)
       << "\" font-size=\"15\" text-anchor=\"middle\">"
       << to_string(res.axis_x.parameter) << "</text>\n";
  sink << "<text x=\"" << fmt(margin_left) << "\" y=\""
       << fmt(height - 30.0) << "\" font-size=\"12\" text-anchor=\"middle\">"
       << fmt(res.axis_x.min, "%g") << "</text>\n";
  sink << "<text x=\"" << fmt(margin_left + plot_w) << "\" y=\""
       << fmt(height - 30.0) << "\" font-size=\"12\" text-anchor=\"middle\">"
       << fmt(res.axis_x.max, "%g") << "</text>\n";
  sink << "<text x=\"18\" y=\"" << fmt(margin_top + 0.5 * plot_h)
       << "\" font-size=\"15\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << fmt(margin_top + 0.5 * plot_h) << ")\">"
       << to_string(res.axis_y.parameter) << "</text>\n";
  sink << "<text x=\"" << fmt(margin_left - 8.0) << "\" y=\""
       << fmt(margin_top + plot_h)
       << "\" font-size=\"12\" text-anchor=\"end\">"
       << fmt(res.axis_y.min, "%g") << "</text>\n";
  sink << "<text x=\"" << fmt(margin_left - 8.0) << "\" y=\""
       << fmt(margin_top + 10.0) << "\" font-size=\"12\" text-anchor=\"end\">"
       << fmt(res.axis_y.max, "%g") << "</text>\n";
  sink << "<text x=\"" << fmt(margin_left + 0.5 * plot_w) << "\" y=\"20\""
       << " font-size=\"15\" text-anchor=\"middle\">" << to_string(channel)
       << "</text>\n";

  // Legend bar for continuous channels.
  if (channel != HeatmapChannel::Outcome) {
    const double bar_x = margin_left + plot_w + 20.0;
    const double bar_w = 18.0;
    const int swatches = 64;
    const double sw_h = plot_h / swatches;
    for (int i = 0; i < swatches; ++i) {
      const double frac = (static_cast<double>(i) + 0.5) / swatches;
      const double y = margin_top + plot_h - (i + 1) * sw_h;
      sink << "<rect x=\"" << fmt(bar_x) << "\" y=\"" << fmt(y) << "\" width=\""
           << fmt(bar_w) << "\" height=\"" << fmt(sw_h + 0.5) << "\" fill=\""
           << lerp_color(frac) << "\"/>\n";
    }
    sink << "<text x=\"" << fmt(bar_x + bar_w + 4.0) << "\" y=\""
         << fmt(margin_top + plot_h) << "\" font-size=\"12\">"
         << fmt(lo, "%.4g") << "</text>\n";
    sink << "<text x=\"" << fmt(bar_x + bar_w + 4.0) << "\" y=\""
         << fmt(margin_top + 10.0) << "\" font-size=\"12\">" << fmt(hi, "%.4g")
         << "</text>\n";
  }

  sink << "</svg>\n";
}

}  // namespace epistock
