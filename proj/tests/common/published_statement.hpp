#pragma once

// Line items of the published 2023 statement, in the units it prints them:
// thousand euro, tonnes CO2e and nBDe.

#include "biovalent/statement.hpp"

#include <array>
#include <string_view>

namespace test::published {

struct Expense {
  std::string_view name;
  double keur;
  double tco2e;
  double nbde;
};

inline constexpr std::array<Expense, 8> kExpenses{{
    {"Staff expenses", 166'856, 46, 0.15},
    {"Depreciation", 2'503, 763, 2.37},
    {"Grants", 3'854, 191, 0.59},
    {"Raw materials, equipment, and goods", 10'031, 3'088, 11.15},
    {"Services", 15'012, 2'962, 11.35},
    {"Rents", 28'743, 158, 0.35},
    {"Travel", 6'408, 1'992, 5.28},
    {"Other", 10'335, 16'440, 37.54},
}};

struct Amount {
  std::string_view name;
  double keur;
};

inline constexpr std::array<Amount, 2> kRevenues{{{"Government funding", 152'151},
                                                  {"Other revenue from operations", 80'720}}};
inline constexpr std::array<Amount, 3> kGains{{{"Fundraising", 227},
                                               {"Investment gains and losses", 2'229},
                                               {"Appropriation", -70}}};

// Printed totals and results.
inline constexpr std::string_view kTotalKeur = "243 742";
inline constexpr std::string_view kTotalTco2e = "25 640";
inline constexpr std::string_view kTotalNbde = "68.79";
inline constexpr double kCarbonCostKeur = 2'379;
inline constexpr double kFinlandCostKeur = 435'778;
inline constexpr double kBrazilCostKeur = 605;
inline constexpr double kNetKeur = -8'486;
inline constexpr double kNetFinlandKeur = -444'265;
inline constexpr double kNetBrazilKeur = -9'091;

// Offset inputs behind the pricing lines.
inline constexpr double kCarbonPrice = 96;      // USD per tCO2e
inline constexpr double kUsdToEur = 0.9665;
inline constexpr double kFinlandAnnualEur = 435'778'738;
inline constexpr double kBrazilAnnualEur = 604'733;

inline biovalent::report::LedgerSummary summary() {
  biovalent::report::LedgerSummary s;
  for (const auto& r : kRevenues) s.revenues.push_back({std::string(r.name), r.keur * 1000});
  for (const auto& e : kExpenses) s.expenses.push_back({std::string(e.name), e.keur * 1000});
  for (const auto& g : kGains) s.gains.push_back({std::string(g.name), g.keur * 1000});
  return s;
}

inline std::vector<biovalent::report::StatementFootprint> footprints() {
  std::vector<biovalent::report::StatementFootprint> out;
  for (const auto& e : kExpenses) out.push_back({std::string(e.name), e.tco2e * 1000, e.nbde * 1e-9});
  return out;
}

inline biovalent::report::ImpactStatement statement() {
  // Pricing lines as printed, in thousand euro.
  const std::vector<biovalent::report::BiodiversityOffset> bio{{"finland", "Finland", kFinlandCostKeur * 1000, 1.0},
                                                               {"brazil", "Brazil", kBrazilCostKeur * 1000, 1.0}};
  return biovalent::report::assemble_statement(summary(), footprints(),
                                               biovalent::report::CarbonPricing{kCarbonPrice, kUsdToEur, 1.0}, bio);
}

}  // namespace test::published
