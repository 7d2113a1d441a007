#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "lbblab/error.hpp"
#include "lbblab/experiments.hpp"

namespace lbblab::experiments {

int Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

double Table::number(std::size_t row, const std::string& name) const {
  const int c = column(name);
  if (c < 0) throw Error(ErrorCode::InvalidArgument, "table has no column '" + name + "'");
  const auto& s = rows.at(row).at(static_cast<std::size_t>(c));
  if (s.empty()) return std::nan("");
  return std::stod(s);
}

std::string write_csv(const Table& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ',';
      out += v[i];
    }
    out += '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
      const auto p = line.find(',', start);
      f.push_back(line.substr(start, p == std::string::npos ? std::string::npos : p - start));
      if (p == std::string::npos) break;
      start = p + 1;
    }
    if (first) {
      t.header = std::move(f);
      first = false;
    } else {
      if (f.size() != t.header.size()) throw Error(ErrorCode::Io, "csv row width does not match header");
      t.rows.push_back(std::move(f));
    }
  }
  if (first) throw Error(ErrorCode::Io, "csv has no header");
  return t;
}

namespace {

constexpr double kW = 800, kH = 600, kLeft = 80, kRight = 190, kTop = 50, kBottom = 60;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.2f", v);
  return b;
}

std::string label(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.4g", v);
  return b;
}

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '&') o += "&amp;";
    else if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else o += c;
  }
  return o;
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : spec.series) {
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  for (const auto& [name, y] : spec.hlines) {
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1;
  if (!std::isfinite(y0)) y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-300) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-300) {
    const double d = std::max(0.5 * std::abs(y0), 0.5);
    y0 -= d;
    y1 += d;
  }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\" "
       "font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  o << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"28\" text-anchor=\"middle\" font-size=\"15\">" << escape(spec.title)
    << "</text>\n";
  o << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double xv = x0 + (x1 - x0) * i / kTicks;
    const double yv = y0 + (y1 - y0) * i / kTicks;
    o << "<line x1=\"" << num(px(xv)) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(px(xv)) << "\" y2=\""
      << num(kTop + ph + 5) << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(kTop + ph + 19) << "\" text-anchor=\"middle\">" << label(xv)
      << "</text>\n";
    o << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(py(yv)) << "\" x2=\"" << num(kLeft) << "\" y2=\""
      << num(py(yv)) << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py(yv) + 4) << "\" text-anchor=\"end\">" << label(yv)
      << "</text>\n";
  }
  o << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kH - 15) << "\" text-anchor=\"middle\">"
    << escape(spec.xlabel) << "</text>\n";
  const std::string ylab = spec.log_y ? "log10 " + spec.ylabel : spec.ylabel;
  o << "<text x=\"18\" y=\"" << num(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << num(kTop + ph / 2) << ")\">" << escape(ylab) << "</text>\n";

  int legend = 0;
  auto legend_entry = [&](const std::string& name, const char* color, bool dashed) {
    const double ly = kTop + 10 + 18 * legend++;
    o << "<line x1=\"" << num(kW - kRight + 12) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(kW - kRight + 36)
      << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\"" << (dashed ? " stroke-dasharray=\"6 4\"" : "")
      << "/>\n";
    o << "<text x=\"" << num(kW - kRight + 42) << "\" y=\"" << num(ly + 4) << "\">" << escape(name) << "</text>\n";
  };
  for (const auto& [name, y] : spec.hlines) {
    o << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(py(y)) << "\" x2=\"" << num(kLeft + pw) << "\" y2=\""
      << num(py(y)) << "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";
    legend_entry(name, "gray", true);
  }
  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const char* color = kColors[s % std::size(kColors)];
    std::string pts;
    for (const auto& [x, y] : spec.series[s].points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (!pts.empty()) pts += ' ';
      pts += num(px(x)) + "," + num(py(y));
    }
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
    for (const auto& [x, y] : spec.series[s].points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      o << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y)) << "\" r=\"2\" fill=\"" << color << "\"/>\n";
    }
    legend_entry(spec.series[s].name, color, false);
  }
  o << "</svg>\n";
  return o.str();
}

namespace {

// Groups rows by the joined values of `keys`, keeping first-seen order.
std::vector<std::pair<std::string, std::vector<std::size_t>>> group(const Table& t, const std::vector<std::string>& keys) {
  std::vector<std::pair<std::string, std::vector<std::size_t>>> g;
  std::map<std::string, std::size_t> where;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    std::string k;
    for (const auto& key : keys) {
      if (!k.empty()) k += ' ';
      k += t.rows[r].at(static_cast<std::size_t>(t.column(key)));
    }
    auto it = where.find(k);
    if (it == where.end()) {
      where[k] = g.size();
      g.push_back({k, {}});
      it = where.find(k);
    }
    g[it->second].second.push_back(r);
  }
  return g;
}

double log10_abs(double v) { return std::abs(v) > 0.0 ? std::log10(std::abs(v)) : std::nan(""); }

// First finite value of a column, if any.
std::optional<double> first_value(const Table& t, const std::string& col) {
  if (t.column(col) < 0) return std::nullopt;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double v = t.number(r, col);
    if (std::isfinite(v)) return v;
  }
  return std::nullopt;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> plots_for(Kind kind, const Table& t) {
  std::vector<std::pair<std::string, std::string>> out;
  const auto ref = first_value(t, "reference");
  switch (kind) {
    case Kind::SvSweep: {
      PlotSpec p{"beta_n(a) per mesh", "a", "beta_n", false, {}, {}};
      const auto meshes = group(t, {"mesh"});
      for (const auto& [name, rows] : meshes) {
        Series s{name, {}};
        for (auto r : rows) s.points.push_back({t.number(r, "a"), t.number(r, "beta")});
        p.series.push_back(std::move(s));
      }
      if (ref) p.hlines.push_back({"reference", *ref});
      out.push_back({"_beta", render_svg(p)});

      // Differences with the finest mesh and with the reference.
      PlotSpec d{"differences", "a", "|difference|", true, {}, {}};
      if (!meshes.empty()) {
        const auto& finest = meshes.back().second;
        std::map<std::string, double> fine;
        for (auto r : finest) fine[t.rows[r][static_cast<std::size_t>(t.column("a"))]] = t.number(r, "beta");
        for (std::size_t m = 0; m + 1 < meshes.size(); ++m) {
          Series s{meshes[m].first + " - " + meshes.back().first, {}};
          for (auto r : meshes[m].second) {
            const auto it = fine.find(t.rows[r][static_cast<std::size_t>(t.column("a"))]);
            if (it != fine.end()) s.points.push_back({t.number(r, "a"), log10_abs(t.number(r, "beta") - it->second)});
          }
          d.series.push_back(std::move(s));
        }
        if (ref) {
          for (const auto& [name, rows] : meshes) {
            Series s{name + " - ref", {}};
            for (auto r : rows) s.points.push_back({t.number(r, "a"), log10_abs(t.number(r, "beta") - *ref)});
            d.series.push_back(std::move(s));
          }
        }
      }
      out.push_back({"_diff", render_svg(d)});
      break;
    }
    case Kind::PSweep: {
      PlotSpec p{"beta_n versus n", "n", "beta_n", false, {}, {}};
      for (const auto& [name, rows] : group(t, {"mesh", "rule"})) {
        Series s{name, {}};
        for (auto r : rows) s.points.push_back({t.number(r, "n"), t.number(r, "beta")});
        p.series.push_back(std::move(s));
      }
      if (ref) p.hlines.push_back({"reference", *ref});
      out.push_back({"_beta", render_svg(p)});
      break;
    }
    case Kind::PolygonLimit: {
      PlotSpec p{"polygon limit", "n", "beta", false, {}, {}};
      Series b{"beta", {}}, lo{"lower bound", {}};
      Series g{"1/sqrt2 - beta", {}}, e{"eps", {}};
      for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double n = t.number(r, "n");
        b.points.push_back({n, t.number(r, "beta")});
        lo.points.push_back({n, t.number(r, "lower")});
        g.points.push_back({std::log10(n), log10_abs(t.number(r, "gap"))});
        e.points.push_back({std::log10(n), log10_abs(t.number(r, "eps"))});
      }
      p.series = {b, lo};
      if (!t.rows.empty()) p.hlines.push_back({"1/sqrt2", t.number(0, "upper")});
      out.push_back({"_beta", render_svg(p)});
      PlotSpec q{"rates", "log10 n", "value", true, {g, e}, {}};
      out.push_back({"_rate", render_svg(q)});
      break;
    }
    case Kind::HRefinement: {
      PlotSpec p{"beta_n under refinement", "log10(hV/rhoP)", "beta_n", false, {}, {}};
      Series s{"beta", {}};
      for (std::size_t r = 0; r < t.rows.size(); ++r) s.points.push_back({std::log10(t.number(r, "ratio")), t.number(r, "beta")});
      p.series.push_back(std::move(s));
      if (ref) p.hlines.push_back({"reference", *ref});
      out.push_back({"_beta", render_svg(p)});
      break;
    }
    case Kind::PerturbRate: {
      PlotSpec p{"eps-closeness", "log10 n", "eps", true, {}, {}};
      Series s{"eps", {}}, j{"sup|1-J|", {}};
      for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double n = std::log10(t.number(r, "n"));
        s.points.push_back({n, log10_abs(t.number(r, "eps"))});
        j.points.push_back({n, log10_abs(t.number(r, "jacobian_deviation"))});
      }
      p.series = {s, j};
      out.push_back({"_eps", render_svg(p)});
      break;
    }
    case Kind::Spectrum: {
      PlotSpec p{"lowest Schur eigenvalues", "index", "sigma", false, {}, {}};
      Series s{"sigma", {}};
      for (std::size_t r = 0; r < t.rows.size(); ++r) s.points.push_back({t.number(r, "index"), t.number(r, "sigma")});
      p.series.push_back(std::move(s));
      if (const auto lo = first_value(t, "ess_low")) p.hlines.push_back({"ess. low", *lo});
      if (const auto hi = first_value(t, "ess_high")) p.hlines.push_back({"ess. high", *hi});
      out.push_back({"_sigma", render_svg(p)});
      break;
    }
    case Kind::SingleBeta:
      break;
  }
  return out;
}

}  // namespace lbblab::experiments
