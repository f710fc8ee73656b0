// Acceptance checks against published figures and oracle suites.
// Prints one [PASS]/[FAIL] line per criterion; exits nonzero if any fails.

#include "biovalent/characterization.hpp"
#include "biovalent/footprint.hpp"
#include "biovalent/ledger.hpp"
#include "biovalent/mrio.hpp"
#include "biovalent/numfmt.hpp"
#include "biovalent/offsets.hpp"
#include "biovalent/pipeline.hpp"
#include "biovalent/statement.hpp"

#include "../common/published_statement.hpp"
#include "../common/random_economy.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#ifndef BIOVALENT_FIXTURE_DIR
#error "BIOVALENT_FIXTURE_DIR must point at data/fixture"
#endif

using namespace biovalent;
namespace fs = std::filesystem;

namespace {

// Tolerances.
constexpr double kOffsetRel = 0.005;
constexpr double kOffsetSeconds = 1.0;
constexpr double kRatioRel = 0.01;
constexpr double kNetTolKeur = 1.0;
constexpr double kNetFinlandTolKeur = 2.0;
constexpr double kCarbonRel = 0.001;
constexpr double kLinearityAbs = 1e-12;
constexpr double kNeumannAbs = 1e-8;
constexpr double kConservationRel = 1e-9;
constexpr double kShareAbs = 1e-12;
constexpr double kMrioSeconds = 10.0;
constexpr double kPriceRel = 1e-14;
constexpr int kRandomTriples = 1000;
constexpr int kRandomEconomies = 100;
constexpr int kRandomMagnitudes = 1000;

double rel_err(double a, double b) { return b == 0 ? std::fabs(a) : std::fabs(a - b) / std::fabs(b); }

std::string num(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// Collects failed sub-checks with a short description.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string ac1(Check& c) {
  const auto t0 = Clock::now();
  struct Case {
    const char* name;
    double gain, price, area, total, annual;
  };
  const Case cases[] = {{"finland", 3.97e-18, 7548, 1'732'030, 13'073'362'127, 435'778'738},
                        {"brazil", 3.42e-16, 901, 20'135, 18'141'975, 604'733}};
  std::string detail;
  for (const auto& k : cases) {
    offsets::OffsetScenario s;
    s.name = k.name;
    s.average_gain = k.gain;
    s.land_price_eur_per_ha = k.price;
    s.horizon_years = 30;
    const auto q = offsets::quote_offset(68.79e-9, s);
    c.expect(rel_err(q.required_area_ha, k.area) <= kOffsetRel, std::string(k.name) + " area " + num(q.required_area_ha));
    c.expect(rel_err(q.total_cost_eur, k.total) <= kOffsetRel, std::string(k.name) + " total " + num(q.total_cost_eur, 12));
    c.expect(rel_err(q.annual_cost_eur, k.annual) <= kOffsetRel, std::string(k.name) + " annual " + num(q.annual_cost_eur, 10));
    detail += std::string(k.name) + " " + num(q.required_area_ha, 7) + " ha, " + num(q.annual_cost_eur, 9) + " EUR/yr; ";
  }
  const double t = seconds_since(t0);
  c.expect(t < kOffsetSeconds, "runtime " + num(t) + " s");
  return detail + num(t * 1e3, 3) + " ms";
}

std::string ac2(Check& c) {
  const double g = offsets::average_gain(2.65e-17, 100, 30);
  c.expect(rel_err(g, 3.975e-18) < 1e-12, "average gain " + num(g, 10));
  // The published figure keeps three significant digits without rounding.
  const int exponent = static_cast<int>(std::floor(std::log10(g)));
  const double digits = std::floor(g / std::pow(10.0, exponent - 2) + 1e-9);
  char shown[32];
  std::snprintf(shown, sizeof shown, "%.2fE%d", digits / 100.0, exponent);
  const std::string text = shown;
  c.expect(text == "3.97E-18", "three digits " + text);
  return "average gain " + num(g, 10) + ", three digits " + text;
}

std::string ac3(Check& c) {
  const auto fin = footprint::line_footprint(2e6, EcosystemVector(2.65e-17, 0, 0), 0).bf(0);
  const auto bra = footprint::line_footprint(1e6, EcosystemVector(2.24e-15, 0, 0), 0).bf(0);
  c.expect(rel_err(fin, 5.30e-11) < 1e-12, "Finland " + num(fin));
  c.expect(rel_err(bra, 2.24e-9) < 1e-12, "Brazil " + num(bra));
  c.expect(rel_err(bra / fin, 42.26) <= kRatioRel, "ratio " + num(bra / fin));
  return num(fin, 3) + " and " + num(bra, 3) + " BDe, ratio " + num(bra / fin, 4);
}

std::string ac4(Check& c) {
  namespace pub = test::published;
  const auto s = pub::statement();
  const auto keur = report::format_keur(s.total_expenses.amount_eur);
  const auto tco2e = report::format_tco2e(s.total_expenses.co2e_kg);
  const auto nbde = report::format_nbde(s.total_expenses.bde);
  c.expect(keur == pub::kTotalKeur, "total k-euro " + keur + " vs " + std::string(pub::kTotalKeur));
  c.expect(tco2e == pub::kTotalTco2e, "total tCO2e " + tco2e + " vs " + std::string(pub::kTotalTco2e));
  c.expect(nbde == pub::kTotalNbde, "total nBDe " + nbde + " vs " + std::string(pub::kTotalNbde) +
                                        " (printed line items sum to " + nbde + ")");
  const double net = s.without_offsets.net_income_eur / 1000;
  const double fin = report::net_positions(s, "finland").net_income_eur / 1000;
  const double bra = report::net_positions(s, "brazil").net_income_eur / 1000;
  c.expect(std::fabs(net - pub::kNetKeur) <= kNetTolKeur, "net " + num(net));
  c.expect(std::fabs(fin - pub::kNetFinlandKeur) <= kNetFinlandTolKeur, "net Finland " + num(fin));
  c.expect(std::fabs(bra - pub::kNetBrazilKeur) <= kNetTolKeur, "net Brazil " + num(bra));
  for (const auto& n : s.with_offsets)
    c.expect(n.co2e_kg == 0.0 && n.bde == 0.0, n.name + " footprint (" + num(n.co2e_kg) + ", " + num(n.bde) + ")");
  return "totals " + keur + " / " + tco2e + " / " + nbde + "; net " + num(net) + ", " + num(fin) + ", " + num(bra) +
         " k-euro";
}

std::string ac5(Check& c) {
  const auto q = offsets::carbon_offset_cost(25'640, test::published::kCarbonPrice, test::published::kUsdToEur);
  const double keur = q.cost_eur / 1000;
  c.expect(rel_err(keur, test::published::kCarbonCostKeur) <= kCarbonRel, "carbon " + num(keur));
  return num(keur, 7) + " k-euro";
}

std::string ac6(Check& c) {
  using footprint::biodiversity_equivalent;
  const double a = biodiversity_equivalent(EcosystemVector(1, 0, 0)).value;
  const double b = biodiversity_equivalent(EcosystemVector(1, 1, 1)).value;
  c.expect(std::fabs(a - 0.801) < 1e-15, "(1,0,0) -> " + num(a, 17));
  c.expect(std::fabs(b - 0.999) < 1e-15, "(1,1,1) -> " + num(b, 17));
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0;
  for (int i = 0; i < kRandomTriples; ++i) {
    const EcosystemVector x(u(rng), u(rng), u(rng)), y(u(rng), u(rng), u(rng));
    const double s = u(rng) * 10;
    const double lhs = biodiversity_equivalent(s * x + y).value;
    const double rhs = s * biodiversity_equivalent(x).value + biodiversity_equivalent(y).value;
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  c.expect(worst <= kLinearityAbs, "linearity error " + num(worst));
  return "0.801, 0.999, max linearity error " + num(worst, 3);
}

std::string ac7(Check& c) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> u(0.1, 10);
  mrio::RegionSectorIndex idx({"R1", "R2", "R3"}, {"s1", "s2"});
  double worst_neumann = 0, worst_conservation = 0, worst_share = 0;
  for (int e = 0; e < kRandomEconomies; ++e) {
    const auto econ = test::random_economy(rng, 3, 2);
    const auto sys = mrio::MrioSystem<double>::build(mrio::make_core<double>(idx, econ.z, econ.y));
    const Eigen::MatrixXd& a = sys.coefficients();
    c.expect(a.colwise().sum().maxCoeff() < 0.9, "column sum above 0.9");

    Eigen::MatrixXd neumann = Eigen::MatrixXd::Identity(6, 6), term = neumann;
    for (int p = 0; p < 5000 && term.cwiseAbs().maxCoeff() > 1e-15; ++p) {
      term = term * a;
      neumann += term;
    }
    worst_neumann = std::max(worst_neumann, (sys.leontief() - neumann).cwiseAbs().maxCoeff());

    Eigen::VectorXd f(6);
    for (int i = 0; i < 6; ++i) f(i) = u(rng);
    const auto t = sys.attribute({"f", "kg", f});
    // Column totals from a separate solve of (I - A) q = y_(j,k).
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd::Identity(6, 6) - a);
    const Eigen::VectorXd s = f.cwiseQuotient(econ.x);
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 2; ++k) {
        Eigen::VectorXd y = Eigen::VectorXd::Zero(6);
        for (std::size_t r = 0; r < 3; ++r) y(idx.position(r, k)) = econ.y(idx.position(r, k), j);
        const double expected = s.dot(qr.solve(y));
        worst_conservation = std::max(worst_conservation, rel_err(t.column_total(j * 2 + k), expected));
      }
    const auto share = characterization::driver_share(t);
    for (Eigen::Index col = 0; col < share.values.cols(); ++col)
      worst_share = std::max(worst_share, std::fabs(share.values.col(col).sum() - 1.0));
  }
  const double secs = seconds_since(t0);
  c.expect(worst_neumann <= kNeumannAbs, "Neumann " + num(worst_neumann));
  c.expect(worst_conservation <= kConservationRel, "conservation " + num(worst_conservation));
  c.expect(worst_share <= kShareAbs, "share " + num(worst_share));
  c.expect(secs < kMrioSeconds, "runtime " + num(secs));
  return std::to_string(kRandomEconomies) + " economies, Neumann " + num(worst_neumann, 2) + ", conservation " +
         num(worst_conservation, 2) + ", share " + num(worst_share, 2) + ", " + num(secs, 3) + " s";
}

std::string ac8(Check& c) {
  double worst = 0;
  int points = 0;
  for (double fap : {1.0, 100.0, 2'500.0, 1e6})
    for (double inf : {-0.05, 0.0, 0.1, 0.3})
      for (double bpcf : {-0.667, 0.0, 0.3}) {
        const double expanded = fap - fap * inf - fap * bpcf + fap * inf * bpcf;
        worst = std::max(worst, rel_err(ledger::harmonize_price(fap, inf, bpcf), expanded));
        ++points;
      }
  const double example = ledger::harmonize_price(100, 0.1, 0.3);
  c.expect(worst <= kPriceRel, "grid error " + num(worst));
  c.expect(std::fabs(example - 63) < 1e-12, "(100, 0.1, 0.3) -> " + num(example, 17));
  return std::to_string(points) + " grid points, max rel error " + num(worst, 2) + "; example " + num(example);
}

std::string ac9(Check& c) {
  const auto a = footprint::format_bde(6.879e-8);
  const auto b = footprint::format_bde(4.70e-8);
  c.expect(a == "68.79 nBDe", a);
  c.expect(b == "47.00 nBDe", b);
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> exponent(-18, -6);
  int bad = 0;
  for (int i = 0; i < kRandomMagnitudes; ++i) {
    const double v = std::pow(10.0, exponent(rng));
    if (v < 1e-18 || v >= 1e-6) continue;
    const auto text = footprint::format_bde(v);
    const auto space = text.find(' ');
    const auto mantissa = parse_double(text.substr(0, space));
    const auto unit = text.substr(space + 1);
    const auto back = footprint::parse_bde(text);
    bool ok = mantissa && back;
    if (ok && unit != "BDe") {
      const double scale = unit == "nBDe" ? 1e-9 : unit == "pBDe" ? 1e-12 : unit == "fBDe" ? 1e-15 : 0;
      ok = scale > 0 && *mantissa >= 1 && *mantissa < 1000 && std::fabs(*back - v) <= 0.005 * scale * (1 + 1e-9);
    } else if (ok) {
      ok = v < 1e-15 && rel_err(*back, v) < 0.01;
    }
    if (!ok) {
      ++bad;
      c.expect(false, num(v) + " -> " + text);
    }
  }
  return a + ", " + b + ", " + std::to_string(kRandomMagnitudes - bad) + "/" + std::to_string(kRandomMagnitudes) +
         " magnitudes";
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string ac10(Check& c) {
  const fs::path fixture = BIOVALENT_FIXTURE_DIR;
  const auto base = fs::temp_directory_path() / "biovalent-acceptance";
  fs::remove_all(base);
  std::size_t compared = 0;
  for (auto format : {pipeline::Format::csv, pipeline::Format::json}) {
    std::vector<fs::path> dirs;
    for (int run = 0; run < 2; ++run) {
      const auto config = pipeline::load_config(fixture / "config.json");
      const auto result = pipeline::run_pipeline(config);
      const auto dir = base / ((format == pipeline::Format::csv ? "csv-" : "json-") + std::to_string(run));
      pipeline::write_outputs(pipeline::render_outputs(result, pipeline::Target::all, format), dir);
      dirs.push_back(dir);
    }
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      const auto other = dirs[1] / entry.path().filename();
      c.expect(fs::exists(other), "missing " + other.string());
      c.expect(read_file(entry.path()) == read_file(other), "differs: " + entry.path().filename().string());
      ++compared;
    }
  }
  c.expect(compared == 10, "compared " + std::to_string(compared) + " files");
  fs::remove_all(base);
  return std::to_string(compared) + " files identical across runs";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<std::string(Check&)>>> criteria{
      {"AC1 offset chain", ac1},          {"AC2 average gain", ac2},       {"AC3 characterization", ac3},
      {"AC4 statement", ac4},             {"AC5 carbon offset", ac5},      {"AC6 BDe weighting", ac6},
      {"AC7 MRIO oracles", ac7},          {"AC8 price harmonization", ac8}, {"AC9 formatting", ac9},
      {"AC10 determinism", ac10}};
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Check c;
    std::string detail;
    try {
      detail = fn(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const bool ok = c.failures.empty();
    failed += !ok;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail;
    for (const auto& f : c.failures) std::cout << "\n       - " << f;
    std::cout << "\n";
  }
  std::cout << (10 - failed) << "/10 criteria passed\n";
  return failed == 0 ? 0 : 1;
}
