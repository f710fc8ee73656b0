#pragma once

// Quadrant of opportunities: consumption against footprint intensity per
// category, split at the medians, with iso-share curves c * m = s * total.

#include "biovalent/footprint.hpp"

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace biovalent::report {

enum class FootprintKind { biodiversity, carbon };

std::string_view to_string(FootprintKind kind);

enum class Quadrant { upper_left, upper_right, lower_left, lower_right };

std::string_view to_string(Quadrant q);

struct QuadrantInput {
  std::string category;
  double consumption_eur = 0.0;
  double intensity = 0.0;  ///< BDe or kg CO2e per euro
};

struct QuadrantDatum {
  std::string category;
  double consumption_eur = 0.0;
  double intensity = 0.0;
  double share = 0.0;  ///< of the total footprint of the included categories
  Quadrant quadrant = Quadrant::lower_left;
};

struct IsoShareCurve {
  double share = 0.0;
  double constant = 0.0;  ///< share * total footprint

  double intensity_at(double consumption_eur) const { return constant / consumption_eur; }
};

struct QuadrantAnalysis {
  FootprintKind kind = FootprintKind::biodiversity;
  std::vector<QuadrantDatum> data;
  double median_consumption = 0.0;
  double median_intensity = 0.0;
  double total_footprint = 0.0;
  std::vector<IsoShareCurve> iso_shares;
  std::vector<std::string> excluded;  ///< categories without positive consumption
};

inline constexpr std::array<double, 3> kDefaultIsoShares{0.01, 0.05, 0.10};

/// Mean of the two middle values for an even count. Throws InputError on empty input.
double median(std::vector<double> values);

/// Points on a median go to the lower / left side.
QuadrantAnalysis quadrant_data(std::span<const QuadrantInput> categories, FootprintKind kind,
                               std::span<const double> iso_shares = kDefaultIsoShares);

/// Uses categories with positive consumption; the rest are listed in `excluded`.
QuadrantAnalysis quadrant_data(std::span<const footprint::CategoryFootprint> categories, FootprintKind kind,
                               std::span<const double> iso_shares = kDefaultIsoShares);

std::string quadrant_csv(std::span<const QuadrantAnalysis> panels);
std::string quadrant_json(std::span<const QuadrantAnalysis> panels);

struct SvgOptions {
  int panel_width = 560;
  int panel_height = 440;
  std::string title = "Quadrant of opportunities";
};

/// Static log-log scatter, one panel per analysis, side by side.
std::string render_quadrant(std::span<const QuadrantAnalysis> panels, const SvgOptions& options = {});
std::string render_quadrant(const QuadrantAnalysis& panel, const SvgOptions& options = {});

}  // namespace biovalent::report
