#include "biovalent/offsets.hpp"

#include <cmath>

namespace biovalent::offsets {

namespace {

bool finite_nonnegative(double v) { return std::isfinite(v) && v >= 0; }

}  // namespace

void OffsetScenario::validate() const {
  const std::string who = "scenario \"" + name + "\": ";
  if (!c0 && !average_gain) throw ScenarioError(who + "needs c0 or average_gain");
  if (c0 && !finite_nonnegative(*c0)) throw ScenarioError(who + "c0 must be >= 0");
  if (average_gain && !(std::isfinite(*average_gain) && *average_gain > 0))
    throw ScenarioError(who + "average_gain must be positive");
  if (!(recovery_years > 0) || !std::isfinite(recovery_years)) throw ScenarioError(who + "t_rec must be positive");
  if (!(horizon_years > 0) || horizon_years > recovery_years)
    throw ScenarioError(who + "horizon must satisfy 0 < horizon <= t_rec");
  if (!(land_price_eur_per_ha > 0) || !std::isfinite(land_price_eur_per_ha))
    throw ScenarioError(who + "land price must be positive");
  if (!(fraction >= 0 && fraction <= 1)) throw ScenarioError(who + "fraction must lie in [0, 1]");
  if (!finite_nonnegative(carbon_price) || !finite_nonnegative(fx_rate))
    throw ScenarioError(who + "carbon price and fx rate must be >= 0");
}

double OffsetScenario::resolved_average_gain() const {
  if (average_gain) return *average_gain;
  if (!c0) throw ScenarioError("scenario \"" + name + "\": needs c0 or average_gain");
  return offsets::average_gain(*c0, recovery_years, horizon_years, averaging);
}

double restoration_gain(double c0, double recovery_years, double years_elapsed) {
  if (!(recovery_years > 0)) throw DomainError("recovery time must be positive");
  if (!(years_elapsed >= 0 && years_elapsed <= recovery_years))
    throw DomainError("elapsed time must lie in [0, t_rec]");
  return c0 * years_elapsed / recovery_years;
}

double average_gain(double c0, double recovery_years, double horizon_years, Averaging averaging) {
  if (!(recovery_years > 0)) throw DomainError("recovery time must be positive");
  if (!(horizon_years > 0 && horizon_years <= recovery_years))
    throw DomainError("horizon must satisfy 0 < horizon <= t_rec");
  switch (averaging) {
    case Averaging::continuous:
      return c0 * horizon_years / (2.0 * recovery_years);
    case Averaging::discrete_years:
      return c0 * (horizon_years + 1.0) / (2.0 * recovery_years);
  }
  return 0.0;
}

double required_area_ha(double footprint_bde, double average_gain) {
  if (!(average_gain > 0) || !std::isfinite(average_gain))
    throw ScenarioError("average gain must be positive to size an offset");
  return footprint_bde / average_gain / 10'000.0;
}

double offset_cost(double area_ha, double land_price_eur_per_ha) { return area_ha * land_price_eur_per_ha; }

double annualize(double total_cost, double horizon_years) {
  if (!(horizon_years > 0)) throw DomainError("horizon must be positive");
  return total_cost / horizon_years;
}

OffsetQuote quote_offset(double footprint_bde, const OffsetScenario& scenario) {
  scenario.validate();
  OffsetQuote q;
  q.average_gain = scenario.resolved_average_gain();
  q.offset_bde = footprint_bde * scenario.fraction;
  q.horizon_years = scenario.horizon_years;
  q.required_area_ha = required_area_ha(q.offset_bde, q.average_gain);
  q.annual_cost_eur = annualize(offset_cost(q.required_area_ha, scenario.land_price_eur_per_ha), scenario.horizon_years);
  // Rebuilt from the annual figure so that annual * horizon == total bit for bit.
  q.total_cost_eur = q.annual_cost_eur * scenario.horizon_years;
  return q;
}

CarbonOffsetQuote carbon_offset_cost(double tonnes, double unit_price, double fx_rate) {
  if (!finite_nonnegative(tonnes) || !finite_nonnegative(unit_price) || !finite_nonnegative(fx_rate))
    throw DomainError("carbon offset inputs must be finite and >= 0");
  return CarbonOffsetQuote{tonnes, unit_price, fx_rate, tonnes * unit_price * fx_rate};
}

}  // namespace biovalent::offsets
