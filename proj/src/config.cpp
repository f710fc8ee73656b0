#include "biovalent/config.hpp"

#include "json.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace biovalent::pipeline {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Strict view of a JSON object: every key must be consumed or declared.
class Object {
 public:
  Object(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigurationError(where_ + ": expected an object");
  }

  void check_keys(std::initializer_list<std::string_view> allowed) const {
    const std::set<std::string_view> ok(allowed);
    for (const auto& [key, value] : j_.items())
      if (!ok.count(key)) throw ConfigurationError(where_ + ": unknown key \"" + key + "\"");
  }

  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }
  const json& at(const std::string& key) const {
    if (!has(key)) throw ConfigurationError(where_ + ": missing \"" + key + "\"");
    return j_.at(key);
  }
  std::string path(const std::string& key) const { return where_ + "." + key; }

  std::string string(const std::string& key) const {
    const auto& v = at(key);
    if (!v.is_string()) throw ConfigurationError(path(key) + ": expected a string");
    return v.get<std::string>();
  }
  double number(const std::string& key) const {
    const auto& v = at(key);
    if (!v.is_number()) throw ConfigurationError(path(key) + ": expected a number");
    return v.get<double>();
  }
  bool boolean(const std::string& key) const {
    const auto& v = at(key);
    if (!v.is_boolean()) throw ConfigurationError(path(key) + ": expected true or false");
    return v.get<bool>();
  }
  std::optional<std::string> opt_string(const std::string& key) const {
    return has(key) ? std::optional(string(key)) : std::nullopt;
  }
  std::optional<double> opt_number(const std::string& key) const {
    return has(key) ? std::optional(number(key)) : std::nullopt;
  }

 private:
  const json& j_;
  std::string where_;
};

json parse_json(std::string_view text, const std::string& source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigurationError(source + ": " + e.what());
  }
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

MrioFiles read_mrio(const Object& o, const fs::path& base) {
  o.check_keys({"flows", "final_demand", "gross_output", "satellite", "year"});
  MrioFiles f;
  f.flows = resolve(base, o.string("flows"));
  f.final_demand = resolve(base, o.string("final_demand"));
  if (auto g = o.opt_string("gross_output")) f.gross_output = resolve(base, *g);
  f.satellite = resolve(base, o.string("satellite"));
  if (auto y = o.opt_number("year")) f.year = static_cast<int>(*y);
  return f;
}

offsets::OffsetScenario read_scenario(const json& j, const std::string& where) {
  Object o(j, where);
  o.check_keys({"name", "country", "c0", "average_gain", "t_rec", "horizon_years", "land_price_eur_per_ha",
                "fraction", "carbon_price", "fx_rate", "averaging", "notes"});
  offsets::OffsetScenario s;
  s.name = o.string("name");
  s.country = o.opt_string("country").value_or(s.name);
  s.c0 = o.opt_number("c0");
  s.average_gain = o.opt_number("average_gain");
  s.recovery_years = o.opt_number("t_rec").value_or(s.recovery_years);
  s.horizon_years = o.opt_number("horizon_years").value_or(s.horizon_years);
  s.land_price_eur_per_ha = o.number("land_price_eur_per_ha");
  s.fraction = o.opt_number("fraction").value_or(1.0);
  s.carbon_price = o.opt_number("carbon_price").value_or(0.0);
  s.fx_rate = o.opt_number("fx_rate").value_or(1.0);
  if (auto a = o.opt_string("averaging")) {
    if (*a == "continuous") s.averaging = offsets::Averaging::continuous;
    else if (*a == "discrete") s.averaging = offsets::Averaging::discrete_years;
    else throw ConfigurationError(o.path("averaging") + ": expected continuous or discrete");
  }
  s.notes = o.opt_string("notes").value_or("");
  s.validate();
  return s;
}

std::vector<offsets::OffsetScenario> read_scenarios(const json& j, const std::string& where) {
  const json* list = &j;
  if (j.is_object()) {
    Object o(j, where);
    o.check_keys({"scenarios"});
    list = &o.at("scenarios");
  }
  if (!list->is_array()) throw ConfigurationError(where + ": expected a list of scenarios");
  std::vector<offsets::OffsetScenario> out;
  std::set<std::string> names;
  for (std::size_t i = 0; i < list->size(); ++i) {
    auto s = read_scenario((*list)[i], where + "[" + std::to_string(i) + "]");
    if (!names.insert(s.name).second) throw ConfigurationError(where + ": scenario \"" + s.name + "\" given twice");
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::vector<offsets::OffsetScenario> parse_scenarios(std::string_view json_text, const std::string& source) {
  return read_scenarios(parse_json(json_text, source), source);
}

PipelineConfig parse_config(std::string_view json_text, const fs::path& base_dir, const fs::path& source) {
  const std::string where = source.string();
  const json doc = parse_json(json_text, where);
  Object root(doc, where);
  root.check_keys({"name", "mrio", "origin", "leontief_method", "aggregate_stressors", "factor_set",
                   "characterization", "region_concordance", "driver_concordance", "climate", "ledger",
                   "account_mapping", "inflation", "basic_prices", "income_statement", "fx_to_eur", "coverage_mode",
                   "categories", "scenarios", "carbon", "statement", "quadrant"});

  PipelineConfig c;
  c.source = source;
  c.name = root.opt_string("name").value_or("");
  const auto file = [&](const std::string& key) { return resolve(base_dir, root.string(key)); };
  const auto opt_file = [&](const std::string& key) -> std::optional<fs::path> {
    if (!root.has(key)) return std::nullopt;
    return file(key);
  };

  if (root.has("mrio")) c.mrio = read_mrio(Object(root.at("mrio"), root.path("mrio")), base_dir);
  if (root.has("origin")) c.origin = read_mrio(Object(root.at("origin"), root.path("origin")), base_dir);
  if (auto m = root.opt_string("leontief_method")) {
    if (*m == "direct") c.method = mrio::LeontiefMethod::direct;
    else if (*m == "iterative") c.method = mrio::LeontiefMethod::iterative;
    else throw ConfigurationError(root.path("leontief_method") + ": expected direct or iterative");
  }
  if (root.has("aggregate_stressors")) {
    const auto& list = root.at("aggregate_stressors");
    if (!list.is_array()) throw ConfigurationError(root.path("aggregate_stressors") + ": expected a list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      Object o(list[i], root.path("aggregate_stressors") + "[" + std::to_string(i) + "]");
      o.check_keys({"pattern", "name"});
      c.aggregate.push_back({o.string("pattern"), o.string("name")});
    }
  }
  c.factor_set = opt_file("factor_set");
  c.characterization = opt_file("characterization");
  c.region_concordance = opt_file("region_concordance");
  c.driver_concordance = opt_file("driver_concordance");
  if (!c.factor_set) {
    if (!c.mrio) throw ConfigurationError(where + ": needs either \"mrio\" tables or a precomputed \"factor_set\"");
    for (const auto* key : {"characterization", "region_concordance", "driver_concordance"})
      if (!root.has(key)) throw ConfigurationError(where + ": missing \"" + std::string(key) + "\"");
  }

  if (root.has("climate")) {
    Object climate(root.at("climate"), root.path("climate"));
    climate.check_keys({"stressors", "gwp"});
    if (climate.has("stressors")) {
      const auto& list = climate.at("stressors");
      if (!list.is_array()) throw ConfigurationError(climate.path("stressors") + ": expected a list");
      for (std::size_t i = 0; i < list.size(); ++i) {
        Object o(list[i], climate.path("stressors") + "[" + std::to_string(i) + "]");
        o.check_keys({"stressor", "gas"});
        c.climate_stressors.push_back({o.string("stressor"), o.string("gas")});
      }
    }
    if (climate.has("gwp")) {
      Object gwp(climate.at("gwp"), climate.path("gwp"));
      for (const auto& [gas, value] : climate.at("gwp").items()) c.gwp[gas] = gwp.number(gas);
    }
  }

  c.ledger = file("ledger");
  c.account_mapping = file("account_mapping");
  c.inflation = opt_file("inflation");
  c.basic_prices = opt_file("basic_prices");
  c.income_statement = opt_file("income_statement");
  c.fx_to_eur = root.opt_number("fx_to_eur").value_or(1.0);
  if (!(c.fx_to_eur > 0)) throw ConfigurationError(root.path("fx_to_eur") + ": must be positive");
  if (auto mode = root.opt_string("coverage_mode")) {
    if (*mode == "strict") c.coverage_mode = footprint::CoverageMode::strict;
    else if (*mode == "lenient") c.coverage_mode = footprint::CoverageMode::lenient;
    else throw ConfigurationError(root.path("coverage_mode") + ": expected strict or lenient");
  }
  if (root.has("categories")) {
    Object cats(root.at("categories"), root.path("categories"));
    for (const auto& [tag, value] : root.at("categories").items()) c.categories[tag] = cats.string(tag);
  }

  if (root.has("scenarios")) {
    const auto& s = root.at("scenarios");
    if (s.is_string()) {
      const auto path = resolve(base_dir, s.get<std::string>());
      c.scenarios = parse_scenarios(read_text(path), path.string());
    } else {
      c.scenarios = read_scenarios(s, root.path("scenarios"));
    }
  }
  if (root.has("carbon")) {
    Object carbon(root.at("carbon"), root.path("carbon"));
    carbon.check_keys({"price", "fx_rate", "fraction"});
    c.carbon = report::CarbonPricing{carbon.number("price"), carbon.opt_number("fx_rate").value_or(1.0),
                                     carbon.opt_number("fraction").value_or(1.0)};
  } else {
    for (const auto& s : c.scenarios)
      if (s.carbon_price > 0) {
        c.carbon = report::CarbonPricing{s.carbon_price, s.fx_rate, 1.0};
        break;
      }
  }
  if (root.has("statement")) {
    Object st(root.at("statement"), root.path("statement"));
    st.check_keys({"deduct_carbon_offset_cost"});
    if (st.has("deduct_carbon_offset_cost"))
      c.statement.deduct_carbon_offset_cost = st.boolean("deduct_carbon_offset_cost");
  }
  if (root.has("quadrant")) {
    Object q(root.at("quadrant"), root.path("quadrant"));
    q.check_keys({"iso_shares"});
    if (q.has("iso_shares")) {
      const auto& list = q.at("iso_shares");
      if (!list.is_array()) throw ConfigurationError(q.path("iso_shares") + ": expected a list");
      c.iso_shares.clear();
      for (const auto& v : list) {
        if (!v.is_number()) throw ConfigurationError(q.path("iso_shares") + ": expected numbers");
        const double s = v.get<double>();
        if (!(s > 0 && s <= 1)) throw ConfigurationError(q.path("iso_shares") + ": shares must lie in (0, 1]");
        c.iso_shares.push_back(s);
      }
    }
  }
  return c;
}

PipelineConfig load_config(const fs::path& path) {
  const auto base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  return parse_config(read_text(path), base, path);
}

}  // namespace biovalent::pipeline
