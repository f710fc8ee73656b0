#pragma once

// Pricing of footprints through offsets: biodiversity gain from retiring land
// out of intensive use under linear recovery, and carbon offsets at a market price.

#include "biovalent/errors.hpp"

#include <optional>
#include <string>

namespace biovalent::offsets {

/// How the linear recovery ramp is averaged over the balancing horizon.
enum class Averaging {
  continuous,     ///< c0 * H / (2 t_rec)
  discrete_years, ///< mean over t = 1..H: c0 * (H + 1) / (2 t_rec)
};

struct OffsetScenario {
  std::string name;
  std::string country;
  std::optional<double> c0;             ///< BDe per m2 under continued intensive use
  std::optional<double> average_gain;   ///< BDe per m2; overrides the c0 derivation when given
  double recovery_years = 100.0;
  double horizon_years = 30.0;
  double land_price_eur_per_ha = 0.0;
  double fraction = 1.0;                ///< share of the footprint to offset
  double carbon_price = 0.0;            ///< per tCO2e in the pricing currency
  double fx_rate = 1.0;                 ///< euro per unit of pricing currency
  Averaging averaging = Averaging::continuous;
  std::string notes;

  /// Throws ScenarioError when an invariant fails.
  void validate() const;
  double resolved_average_gain() const;
};

struct OffsetQuote {
  double required_area_ha = 0.0;
  double total_cost_eur = 0.0;
  double annual_cost_eur = 0.0;
  double average_gain = 0.0;
  double offset_bde = 0.0;  ///< footprint amount being offset
  double horizon_years = 0.0;
};

struct CarbonOffsetQuote {
  double tonnes = 0.0;
  double unit_price = 0.0;
  double fx_rate = 1.0;
  double cost_eur = 0.0;
};

/// c0 - c0 (t_rec - t_i) / t_rec, i.e. c0 * t_i / t_rec, for t_i in [0, t_rec].
double restoration_gain(double c0, double recovery_years, double years_elapsed);

double average_gain(double c0, double recovery_years, double horizon_years,
                    Averaging averaging = Averaging::continuous);

/// Hectares of land whose average gain balances `footprint_bde`.
double required_area_ha(double footprint_bde, double average_gain);

double offset_cost(double area_ha, double land_price_eur_per_ha);
double annualize(double total_cost, double horizon_years);

/// Area, total and annual cost for offsetting `fraction * footprint_bde`.
/// total_cost_eur == annual_cost_eur * horizon_years holds exactly.
OffsetQuote quote_offset(double footprint_bde, const OffsetScenario& scenario);

CarbonOffsetQuote carbon_offset_cost(double tonnes, double unit_price, double fx_rate);

}  // namespace biovalent::offsets
