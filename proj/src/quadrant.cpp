#include "biovalent/quadrant.hpp"

#include "biovalent/csv.hpp"
#include "biovalent/numfmt.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>

namespace biovalent::report {

namespace {

std::string num(double v) { return format_fixed(v, 2); }

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string percent_label(double share) {
  std::string s = format_fixed(share * 100.0, 1);
  if (s.ends_with(".0")) s.resize(s.size() - 2);
  return s + "%";
}

struct Axis {
  int lo = 0;  // decades
  int hi = 1;

  static Axis spanning(double min, double max) {
    Axis a{static_cast<int>(std::floor(std::log10(min))), static_cast<int>(std::ceil(std::log10(max)))};
    if (a.hi <= a.lo) a.hi = a.lo + 1;
    return a;
  }
  double fraction(double v) const { return (std::log10(v) - lo) / (hi - lo); }
};

std::string_view axis_unit(FootprintKind kind) {
  return kind == FootprintKind::biodiversity ? "BDe / EUR" : "kg CO2e / EUR";
}

void render_panel(std::string& out, const QuadrantAnalysis& q, int index, const SvgOptions& o) {
  constexpr double left = 80, right = 24, top = 48, bottom = 64;
  const double w = o.panel_width - left - right;
  const double h = o.panel_height - top - bottom;
  const std::string id = "plot-" + std::to_string(index);

  std::vector<const QuadrantDatum*> points;
  double cmin = q.median_consumption, cmax = q.median_consumption;
  double mmin = q.median_intensity, mmax = q.median_intensity;
  for (const auto& d : q.data) {
    if (!(d.consumption_eur > 0 && d.intensity > 0)) continue;  // not drawable on log axes
    points.push_back(&d);
    cmin = std::min(cmin, d.consumption_eur);
    cmax = std::max(cmax, d.consumption_eur);
    mmin = std::min(mmin, d.intensity);
    mmax = std::max(mmax, d.intensity);
  }
  if (!(cmin > 0)) cmin = cmax > 0 ? cmax : 1.0;
  if (!(mmin > 0)) mmin = mmax > 0 ? mmax : 1.0;
  const Axis xa = Axis::spanning(cmin, std::max(cmax, cmin));
  const Axis ya = Axis::spanning(mmin, std::max(mmax, mmin));
  const auto px = [&](double c) { return left + xa.fraction(c) * w; };
  const auto py = [&](double m) { return top + h - ya.fraction(m) * h; };

  out += "<g class=\"panel\" transform=\"translate(" + std::to_string(index * o.panel_width) + ",0)\">\n";
  out += "<clipPath id=\"" + id + "\"><rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(w) +
         "\" height=\"" + num(h) + "\"/></clipPath>\n";
  out += "<text class=\"panel-title\" x=\"" + num(left + w / 2) + "\" y=\"28\" text-anchor=\"middle\">" +
         (q.kind == FootprintKind::biodiversity ? std::string("Biodiversity footprint") : std::string("Carbon footprint")) +
         "</text>\n";
  out += "<rect class=\"frame\" x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(w) + "\" height=\"" +
         num(h) + "\" fill=\"none\" stroke=\"#444\"/>\n";

  for (int d = xa.lo; d <= xa.hi; ++d) {
    const double x = px(std::pow(10.0, d));
    out += "<line class=\"tick\" x1=\"" + num(x) + "\" y1=\"" + num(top + h) + "\" x2=\"" + num(x) + "\" y2=\"" +
           num(top + h + 5) + "\" stroke=\"#444\"/>";
    out += "<text class=\"tick-label\" x=\"" + num(x) + "\" y=\"" + num(top + h + 18) +
           "\" text-anchor=\"middle\" font-size=\"10\">1e" + std::to_string(d) + "</text>\n";
  }
  for (int d = ya.lo; d <= ya.hi; ++d) {
    const double y = py(std::pow(10.0, d));
    out += "<line class=\"tick\" x1=\"" + num(left - 5) + "\" y1=\"" + num(y) + "\" x2=\"" + num(left) + "\" y2=\"" +
           num(y) + "\" stroke=\"#444\"/>";
    out += "<text class=\"tick-label\" x=\"" + num(left - 8) + "\" y=\"" + num(y + 3) +
           "\" text-anchor=\"end\" font-size=\"10\">1e" + std::to_string(d) + "</text>\n";
  }
  out += "<text class=\"axis-label\" x=\"" + num(left + w / 2) + "\" y=\"" + num(top + h + 40) +
         "\" text-anchor=\"middle\">Consumption (EUR)</text>\n";
  out += "<text class=\"axis-label\" transform=\"translate(18," + num(top + h / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">Intensity (" + std::string(axis_unit(q.kind)) + ")</text>\n";

  out += "<g clip-path=\"url(#" + id + ")\">\n";
  const double c_lo = std::pow(10.0, xa.lo), c_hi = std::pow(10.0, xa.hi);
  const double m_lo = std::pow(10.0, ya.lo), m_hi = std::pow(10.0, ya.hi);
  for (const auto& curve : q.iso_shares) {
    if (!(curve.constant > 0)) continue;
    out += "<path class=\"iso-share\" d=\"M" + num(px(c_lo)) + " " + num(py(curve.intensity_at(c_lo))) + " L" +
           num(px(c_hi)) + " " + num(py(curve.intensity_at(c_hi))) +
           "\" fill=\"none\" stroke=\"#888\" stroke-dasharray=\"6 4\"/>\n";
  }
  out += "<line class=\"median\" x1=\"" + num(px(q.median_consumption)) + "\" y1=\"" + num(top) + "\" x2=\"" +
         num(px(q.median_consumption)) + "\" y2=\"" + num(top + h) + "\" stroke=\"#c33\"/>\n";
  out += "<line class=\"median\" x1=\"" + num(left) + "\" y1=\"" + num(py(q.median_intensity)) + "\" x2=\"" +
         num(left + w) + "\" y2=\"" + num(py(q.median_intensity)) + "\" stroke=\"#c33\"/>\n";
  out += "</g>\n";

  for (const auto& curve : q.iso_shares) {
    if (!(curve.constant > 0)) continue;
    // Label where the curve leaves the plot on the right or the top.
    double c = c_hi, m = curve.intensity_at(c_hi);
    if (m > m_hi) {
      c = curve.constant / m_hi;
      m = m_hi;
    }
    if (m < m_lo || c < c_lo) continue;
    out += "<text class=\"iso-share-label\" x=\"" + num(px(c) - 4) + "\" y=\"" + num(py(m) + 12) +
           "\" text-anchor=\"end\" font-size=\"10\" fill=\"#666\">" + percent_label(curve.share) + "</text>\n";
  }

  for (const auto* d : points) {
    const double x = px(d->consumption_eur), y = py(d->intensity);
    out += "<circle class=\"point\" cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"5\" fill=\"#2a6\"/>";
    out += "<text class=\"label\" x=\"" + num(x + 7) + "\" y=\"" + num(y - 7) + "\" font-size=\"11\">" +
           xml_escape(d->category) + "</text>\n";
  }
  out += "</g>\n";
}

}  // namespace

std::string_view to_string(FootprintKind kind) {
  return kind == FootprintKind::biodiversity ? "biodiversity" : "carbon";
}

std::string_view to_string(Quadrant q) {
  switch (q) {
    case Quadrant::upper_left: return "upper-left";
    case Quadrant::upper_right: return "upper-right";
    case Quadrant::lower_left: return "lower-left";
    case Quadrant::lower_right: return "lower-right";
  }
  return "";
}

double median(std::vector<double> values) {
  if (values.empty()) throw InputError("median of an empty list");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

QuadrantAnalysis quadrant_data(std::span<const QuadrantInput> categories, FootprintKind kind,
                               std::span<const double> iso_shares) {
  if (categories.empty()) throw InputError("quadrant analysis needs at least one category");
  QuadrantAnalysis q;
  q.kind = kind;
  std::vector<double> cs, ms;
  for (const auto& c : categories) {
    if (!std::isfinite(c.consumption_eur) || !std::isfinite(c.intensity))
      throw InputError("category \"" + c.category + "\" has a non-finite value");
    if (!(c.consumption_eur > 0)) {
      q.excluded.push_back(c.category);
      continue;
    }
    cs.push_back(c.consumption_eur);
    ms.push_back(c.intensity);
    q.total_footprint += c.consumption_eur * c.intensity;
  }
  if (cs.empty()) throw InputError("quadrant analysis needs a category with positive consumption");
  q.median_consumption = median(cs);
  q.median_intensity = median(ms);

  for (const auto& c : categories) {
    if (!(c.consumption_eur > 0)) continue;
    QuadrantDatum d{c.category, c.consumption_eur, c.intensity, 0.0, Quadrant::lower_left};
    d.share = q.total_footprint != 0 ? c.consumption_eur * c.intensity / q.total_footprint : 0.0;
    const bool right = c.consumption_eur > q.median_consumption;
    const bool upper = c.intensity > q.median_intensity;
    d.quadrant = upper ? (right ? Quadrant::upper_right : Quadrant::upper_left)
                       : (right ? Quadrant::lower_right : Quadrant::lower_left);
    q.data.push_back(std::move(d));
  }
  for (double s : iso_shares) {
    if (!(s > 0 && s <= 1)) throw InputError("iso-share levels must lie in (0, 1]");
    q.iso_shares.push_back({s, s * q.total_footprint});
  }
  return q;
}

QuadrantAnalysis quadrant_data(std::span<const footprint::CategoryFootprint> categories, FootprintKind kind,
                               std::span<const double> iso_shares) {
  std::vector<QuadrantInput> inputs;
  std::vector<std::string> skipped;
  for (const auto& c : categories) {
    const auto& intensity = kind == FootprintKind::biodiversity ? c.bde_intensity : c.co2e_intensity;
    if (!(c.consumption_eur > 0) || !intensity) {
      skipped.push_back(c.name);
      continue;
    }
    inputs.push_back({c.name, c.consumption_eur, *intensity});
  }
  if (categories.empty()) throw InputError("quadrant analysis needs at least one category");
  if (inputs.empty()) throw InputError("quadrant analysis needs a category with positive consumption");
  auto q = quadrant_data(inputs, kind, iso_shares);
  q.excluded.insert(q.excluded.end(), skipped.begin(), skipped.end());
  return q;
}

std::string quadrant_csv(std::span<const QuadrantAnalysis> panels) {
  std::string out = "footprint,category,consumption_eur,intensity,share,quadrant\n";
  for (const auto& q : panels)
    for (const auto& d : q.data) {
      const std::vector<std::string> fields{std::string(to_string(q.kind)), d.category,
                                            format_shortest(d.consumption_eur), format_shortest(d.intensity),
                                            format_shortest(d.share), std::string(to_string(d.quadrant))};
      out += csv_record(fields) + "\n";
    }
  return out;
}

std::string quadrant_json(std::span<const QuadrantAnalysis> panels) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& q : panels) {
    nlohmann::ordered_json p;
    p["footprint"] = to_string(q.kind);
    p["median_consumption_eur"] = q.median_consumption;
    p["median_intensity"] = q.median_intensity;
    p["total_footprint"] = q.total_footprint;
    p["iso_shares"] = nlohmann::ordered_json::array();
    for (const auto& c : q.iso_shares) p["iso_shares"].push_back({{"share", c.share}, {"constant", c.constant}});
    p["categories"] = nlohmann::ordered_json::array();
    for (const auto& d : q.data)
      p["categories"].push_back({{"category", d.category},
                                 {"consumption_eur", d.consumption_eur},
                                 {"intensity", d.intensity},
                                 {"share", d.share},
                                 {"quadrant", to_string(d.quadrant)}});
    p["excluded"] = q.excluded;
    doc.push_back(std::move(p));
  }
  return doc.dump(2) + "\n";
}

std::string render_quadrant(std::span<const QuadrantAnalysis> panels, const SvgOptions& options) {
  const int width = options.panel_width * static_cast<int>(std::max<std::size_t>(panels.size(), 1));
  const int height = options.panel_height + 24;
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
         std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) + " " + std::to_string(height) +
         "\" font-family=\"sans-serif\">\n";
  out += "<title>" + xml_escape(options.title) + "</title>\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < panels.size(); ++i) render_panel(out, panels[i], static_cast<int>(i), options);
  out += "</svg>\n";
  return out;
}

std::string render_quadrant(const QuadrantAnalysis& panel, const SvgOptions& options) {
  return render_quadrant(std::span<const QuadrantAnalysis>(&panel, 1), options);
}

}  // namespace biovalent::report
