#include "smirnov/report.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "smirnov/domain_io.hpp"

namespace smirnov {
namespace {

std::string field(const std::optional<double>& v) { return v ? fmt::format("{:.17g}", *v) : std::string(); }

nlohmann::json fit_json(const FitResult& f) {
  nlohmann::json j;
  if (f.model == FitModel::PowerLaw) {
    j["model"] = "power-law";
    j["exponent"] = f.exponent;
    j["exponent_stderr"] = f.exponent_stderr;
  } else {
    j["model"] = "stretched-exponential";
    j["q"] = f.q;
    j["r"] = f.r;
    j["power_rss"] = f.power_rss;
    j["preferred"] = f.preferred;
  }
  j["log_intercept"] = f.intercept;
  j["rss"] = f.rss;
  j["points"] = f.points;
  return j;
}

template <typename Fit>
nlohmann::json try_fit(Fit&& fit, const std::vector<RateRow>& rows) {
  try {
    return fit_json(fit(rows));
  } catch (const ConfigError& e) {
    return {{"error", e.what()}};
  }
}

}  // namespace

std::string rates_csv(const std::vector<RateRow>& rows) {
  std::string out = "n,err_p,err_sup,bound12,lead_coeff_scaled,zero_moment_gap\n";
  for (const auto& r : rows)
    out += fmt::format("{},{:.17g},{},{:.17g},{:.17g},{}\n", r.n, r.err_p, field(r.err_sup), r.bound12,
                       r.lead_coeff_scaled, field(r.zero_moment_gap));
  return out;
}

nlohmann::json rates_summary(const RateConfig& config, const SweepResult& sweep) {
  nlohmann::json j;
  j["domain"] = describe_domain(config.domain);
  j["p"] = config.p;
  j["n_list"] = config.n_list;
  nlohmann::json ref{{"mode", config.reference.mode == ReferenceMode::Oracle ? "oracle" : "self"},
                     {"radius", sweep.radius}};
  if (config.reference.mode == ReferenceMode::Self) {
    ref["n_ref"] = config.reference.n_ref;
    ref["undersized"] = sweep.reference_undersized;
  }
  j["reference"] = ref;
  j["length"] = sweep.length;
  j["capacity_estimate"] = sweep.capacity;

  const RatePrediction pred = predicted_rate(config.domain, config.p);
  nlohmann::json pj{{"label", pred.label}};
  if (pred.lambda) pj["min_lambda"] = *pred.lambda;
  if (pred.exponent) pj["exponent"] = *pred.exponent;
  j["prediction"] = pj;

  j["fits"] = {{"power_law", try_fit(fit_power_law, sweep.rows)},
               {"stretched_exp", try_fit(fit_stretched_exp, sweep.rows)}};

  nlohmann::json bound{{"slack", kBoundSlack}, {"floor", kBoundFloor}, {"violations", nlohmann::json::array()}};
  bool measured = false;
  for (const auto& r : sweep.rows) {
    measured = measured || r.err_sup.has_value();
    if (!bound_holds(r)) bound["violations"].push_back(r.n);
  }
  bound["measured"] = measured;
  bound["holds"] = bound["violations"].empty();
  j["sup_bound"] = bound;

  const LeadingCoeffReport lead = leading_coeff_report(sweep.rows, sweep.capacity);
  j["lead_coeff"] = {{"scaled", lead.scaled}, {"windowed_max", lead.windowed_max}};

  nlohmann::json notes = nlohmann::json::object();
  for (const auto& r : sweep.rows)
    if (!r.note.empty()) notes[std::to_string(r.n)] = r.note;
  j["notes"] = notes;
  return j;
}

nlohmann::json zeros_summary(const RateConfig& config, const SweepResult& sweep, const ConjecturalZeros& conjectural) {
  nlohmann::json j;
  j["domain"] = config.domain.name();
  j["p"] = config.p;
  j["k_max"] = config.roots.k_max;
  j["leja_m"] = config.roots.leja_m;
  j["capacity_estimate"] = sweep.capacity;

  nlohmann::json tilde = nlohmann::json::array();
  std::optional<double> best;
  Index best_n = 0;
  for (const auto& r : sweep.rows) {
    nlohmann::json e{{"n", r.n}, {"gap", r.zero_moment_gap ? nlohmann::json(*r.zero_moment_gap) : nlohmann::json()}};
    if (!r.note.empty()) e["note"] = r.note;
    tilde.push_back(e);
    if (r.zero_moment_gap && (!best || *r.zero_moment_gap < *best)) {
      best = r.zero_moment_gap;
      best_n = r.n;
    }
  }
  j["tilde"] = {{"series", tilde}, {"min_gap", best ? nlohmann::json(*best) : nlohmann::json()}, {"argmin_n", best_n}};

  nlohmann::json conj = nlohmann::json::array();
  for (std::size_t i = 0; i < conjectural.gaps.size(); ++i) {
    nlohmann::json e{{"n", config.n_list[i]},
                     {"gap", conjectural.gaps[i] ? nlohmann::json(*conjectural.gaps[i]) : nlohmann::json()}};
    if (!conjectural.notes[i].empty()) e["note"] = conjectural.notes[i];
    conj.push_back(e);
  }
  j["qnp"] = {{"label", "conjectural"}, {"series", conj}};
  return j;
}

namespace {

std::string xml_escape(const std::string& text) {
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

}  // namespace

std::string loglog_svg(const std::vector<RateRow>& rows, const std::string& title) {
  constexpr double W = 640, H = 480, left = 80, right = 20, top = 40, bottom = 60;
  struct Series {
    std::string name, color;
    std::vector<std::pair<double, double>> pts;
  };
  std::vector<Series> series{{"err_p", "#1f77b4", {}}, {"err_sup", "#d62728", {}}, {"bound12", "#2ca02c", {}}};
  for (const auto& r : rows) {
    const double x = static_cast<double>(r.n);
    if (r.err_p > 0) series[0].pts.emplace_back(x, r.err_p);
    if (r.err_sup && *r.err_sup > 0) series[1].pts.emplace_back(x, *r.err_sup);
    if (r.bound12 > 0 && r.err_sup) series[2].pts.emplace_back(x, r.bound12);
  }
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series)
    for (auto [x, y] : s.pts) {
      xmin = std::min(xmin, std::log10(x));
      xmax = std::max(xmax, std::log10(x));
      ymin = std::min(ymin, std::log10(y));
      ymax = std::max(ymax, std::log10(y));
    }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = -1, ymax = 0;
  ymin = std::floor(ymin);
  ymax = std::ceil(ymax);
  if (ymax <= ymin) ymax = ymin + 1;
  if (xmax <= xmin) xmax = xmin + 1;
  const double pad = 0.05 * (xmax - xmin);
  xmin -= pad;
  xmax += pad;
  auto px = [&](double lx) { return left + (lx - xmin) / (xmax - xmin) * (W - left - right); };
  auto py = [&](double ly) { return top + (ymax - ly) / (ymax - ymin) * (H - top - bottom); };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
      "font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      W, H);
  svg += fmt::format("<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n", W / 2, xml_escape(title));
  svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", left, top,
                     W - left - right, H - top - bottom);
  for (int e = static_cast<int>(ymin); e <= static_cast<int>(ymax); ++e)
    svg += fmt::format(
        "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#ddd\"/>\n"
        "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">1e{}</text>\n",
        left, py(e), W - right, py(e), left - 6, py(e) + 4, e);
  for (const auto& r : rows) {
    const double x = px(std::log10(static_cast<double>(r.n)));
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", x, H - bottom + 18, r.n);
  }
  svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">degree n (log scale)</text>\n",
                     left + (W - left - right) / 2, H - 16);
  svg += fmt::format(
      "<text x=\"18\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {})\">error (log scale)</text>\n",
      top + (H - top - bottom) / 2, top + (H - top - bottom) / 2);

  double legend_y = top + 16;
  for (const auto& s : series) {
    if (s.pts.empty()) continue;
    std::string path;
    for (auto [x, y] : s.pts) {
      path += fmt::format("{:.2f},{:.2f} ", px(std::log10(x)), py(std::log10(y)));
      svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n", px(std::log10(x)),
                         py(std::log10(y)), s.color);
    }
    svg += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\"/>\n", path, s.color);
    svg += fmt::format("<text x=\"{}\" y=\"{:.2f}\" fill=\"{}\">{}</text>\n", W - right - 80, legend_y, s.color, s.name);
    legend_y += 16;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace smirnov
