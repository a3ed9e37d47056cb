#include "fracmax/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "fracmax/errors.hpp"

namespace fracmax::report {

namespace fs = std::filesystem;

namespace {

double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// Population skewness and excess kurtosis.
std::pair<double, double> shape(const std::vector<double>& v) {
  const double m = mean_of(v);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : v) {
    const double d = x - m;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  const double n = static_cast<double>(v.size());
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (m2 <= 0.0) return {0.0, 0.0};
  return {m3 / std::pow(m2, 1.5), m4 / (m2 * m2) - 3.0};
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

nlohmann::json spread_json(const Spread& s) {
  return {{"median", s.median}, {"iqr", s.iqr}, {"q1", s.q1}, {"q3", s.q3}, {"count", s.count}};
}

struct Series {
  std::string label;
  std::string color;
  std::vector<double> y;
  std::vector<double> lo;  // optional error bars
  std::vector<double> hi;
};

std::string svg_chart(const std::string& title, const std::string& ylabel, const std::vector<double>& x,
                      const std::vector<Series>& series, double ref_line) {
  constexpr double W = 640, H = 400, L = 70, R = 150, T = 40, B = 50;
  double ymin = ref_line, ymax = ref_line;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.y.size(); ++i) {
      for (double v : {s.y[i], s.lo.empty() ? s.y[i] : s.lo[i], s.hi.empty() ? s.y[i] : s.hi[i]}) {
        if (!std::isfinite(v)) continue;
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
      }
    }
  if (ymax - ymin < 1e-12) ymax = ymin + 1.0;
  const double pad = 0.08 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  const double lx0 = std::log(x.front()), lx1 = std::log(x.back());
  auto px = [&](double v) {
    return lx1 > lx0 ? L + (std::log(v) - lx0) / (lx1 - lx0) * (W - L - R) : L + 0.5 * (W - L - R);
  };
  auto py = [&](double v) { return T + (ymax - v) / (ymax - ymin) * (H - T - B); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n"
    << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
    << "\" stroke=\"black\"/>\n"
    << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  for (double v : x)
    o << "<text x=\"" << px(v) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << num(v) << "</text>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = ymin + (ymax - ymin) * k / 4.0;
    o << "<text x=\"" << L - 6 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\">" << num(std::round(v * 1000) / 1000)
      << "</text>\n";
  }
  o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">N (log scale)</text>\n"
    << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 16 " << (T + H - B) / 2
    << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n"
    << "<line x1=\"" << L << "\" y1=\"" << py(ref_line) << "\" x2=\"" << W - R << "\" y2=\"" << py(ref_line)
    << "\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const Series& ser = series[s];
    o << "<polyline fill=\"none\" stroke=\"" << ser.color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < x.size(); ++i)
      if (std::isfinite(ser.y[i])) o << px(x[i]) << "," << py(ser.y[i]) << " ";
    o << "\"/>\n";
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!std::isfinite(ser.y[i])) continue;
      o << "<circle cx=\"" << px(x[i]) << "\" cy=\"" << py(ser.y[i]) << "\" r=\"3\" fill=\"" << ser.color << "\"/>\n";
      if (!ser.lo.empty() && std::isfinite(ser.lo[i]) && std::isfinite(ser.hi[i]))
        o << "<line x1=\"" << px(x[i]) << "\" y1=\"" << py(ser.lo[i]) << "\" x2=\"" << px(x[i]) << "\" y2=\""
          << py(ser.hi[i]) << "\" stroke=\"" << ser.color << "\"/>\n";
    }
    o << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 16 + 18 * s << "\" fill=\"" << ser.color << "\">"
      << ser.label << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << text;
}

}  // namespace

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double mx = mean_of(x), my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

Spread spread(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  Spread s;
  s.count = v.size();
  s.median = quantile(v, 0.5);
  s.q1 = quantile(v, 0.25);
  s.q3 = quantile(v, 0.75);
  s.iqr = s.q3 - s.q1;
  return s;
}

std::vector<ConvergenceRow> convergence_report(const std::vector<harness::ReplicateRecord>& records,
                                               double ratio_guard, std::size_t min_replicates) {
  std::map<std::pair<double, double>, std::vector<const harness::ReplicateRecord*>> groups;
  for (const auto& r : records) groups[{r.alpha, r.n}].push_back(&r);
  if (groups.size() < 2) throw InsufficientData("need at least two intensities, got " + std::to_string(groups.size()));

  std::vector<ConvergenceRow> rows;
  for (auto& [key, group] : groups) {
    std::sort(group.begin(), group.end(), [](auto* a, auto* b) { return a->id < b->id; });
    ConvergenceRow row;
    row.alpha = key.first;
    row.n = key.second;
    std::vector<double> s2, s3, t2, t3, ratio2, ratio3, cross, parts, v21, e, t, lt, gap;
    const double factor = std::sqrt(3.0) / 3.0 * std::pow(row.n, -(2.0 - row.alpha) / 4.0);
    for (const auto* r : group) {
      if (!r->ok) {
        ++row.failed;
        continue;
      }
      s2.push_back(r->report.scaled.s2);
      s3.push_back(r->report.scaled.s3);
      t2.push_back(r->target_v2);
      t3.push_back(r->target_v3);
      parts.push_back(r->report.v2_parts.v1 + r->report.v2_parts.v2);
      v21.push_back(r->report.v2_parts.v21);
      e.push_back(static_cast<double>(r->report.edges) / row.n);
      t.push_back(static_cast<double>(r->report.triangles) / row.n);
      lt.push_back(r->local_time.value);
      gap.push_back(std::abs(r->local_time.value - r->local_time_half.value));
      if (r->local_time.value > ratio_guard) {
        ratio2.push_back(r->report.scaled.s2 / r->target_v2);
        ratio3.push_back(r->report.scaled.s3 / r->target_v3);
        cross.push_back(factor * r->report.v2_parts.v21 / r->target_v2);
      } else {
        ++row.guarded;
      }
    }
    row.replicates = s2.size();
    if (row.replicates < min_replicates)
      throw InsufficientData("N = " + harness::format_number(row.n) + " has " + std::to_string(row.replicates) +
                             " successful replicates, need " + std::to_string(min_replicates));
    row.corr_s2 = pearson(s2, t2);
    row.corr_s3 = pearson(s3, t3);
    row.ratio2 = spread(ratio2);
    row.ratio3 = spread(ratio3);
    row.ratio2_cross = spread(cross);
    row.edges_per_n = mean_of(e);
    row.triangles_per_n = mean_of(t);
    std::tie(row.skew_v2g, row.kurt_v2g) = shape(parts);
    row.sd_v2_cross = stddev(v21);
    row.sd_v2_parts = stddev(parts);
    row.mean_local_time = mean_of(lt);
    row.mean_local_time_gap = mean_of(gap);
    rows.push_back(row);
  }
  return rows;
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  out << "alpha,N,replicates,corr_s2,corr_s3,ratio2_median,ratio2_iqr,ratio3_median,ratio3_iqr,"
         "edges_per_n,triangles_per_n,skew_v2g,kurt_v2g\n";
  for (const auto& r : rows) {
    out << num(r.alpha) << ',' << num(r.n) << ',' << r.replicates << ',' << num(r.corr_s2) << ','
        << num(r.corr_s3) << ',' << num(r.ratio2.median) << ',' << num(r.ratio2.iqr) << ','
        << num(r.ratio3.median) << ',' << num(r.ratio3.iqr) << ',' << num(r.edges_per_n) << ','
        << num(r.triangles_per_n) << ',' << num(r.skew_v2g) << ',' << num(r.kurt_v2g) << '\n';
  }
}

void to_json(nlohmann::json& j, const ConvergenceRow& r) {
  j = nlohmann::json{{"alpha", r.alpha},
                     {"N", r.n},
                     {"replicates", r.replicates},
                     {"failed", r.failed},
                     {"guarded", r.guarded},
                     {"corr_s2", r.corr_s2},
                     {"corr_s3", r.corr_s3},
                     {"ratio2", spread_json(r.ratio2)},
                     {"ratio3", spread_json(r.ratio3)},
                     {"ratio2_cross", spread_json(r.ratio2_cross)},
                     {"edges_per_n", r.edges_per_n},
                     {"triangles_per_n", r.triangles_per_n},
                     {"skew_v2g", r.skew_v2g},
                     {"kurt_v2g", r.kurt_v2g},
                     {"sd_v2_cross", r.sd_v2_cross},
                     {"sd_v2_parts", r.sd_v2_parts},
                     {"mean_local_time", r.mean_local_time},
                     {"mean_local_time_gap", r.mean_local_time_gap}};
}

void write_all(const fs::path& root, const std::vector<ConvergenceRow>& rows) {
  std::ostringstream csv;
  write_convergence_csv(csv, rows);
  write_file(root / "convergence.csv", csv.str());
  write_file(root / "convergence.json", nlohmann::json(rows).dump(2) + "\n");

  std::vector<double> x;
  Series c2{"corr s2", "#1f77b4", {}, {}, {}}, c3{"corr s3", "#d62728", {}, {}, {}};
  Series r2{"s2 / (c_V2 L)", "#1f77b4", {}, {}, {}}, r3{"s3 / (c_V3 L)", "#d62728", {}, {}, {}};
  // One chart per alpha would be cleaner; campaigns use a single alpha.
  for (const auto& r : rows) {
    x.push_back(r.n);
    c2.y.push_back(r.corr_s2);
    c3.y.push_back(r.corr_s3);
    for (auto* pair : {&r2, &r3}) {
      const Spread& s = pair == &r2 ? r.ratio2 : r.ratio3;
      pair->y.push_back(s.median);
      pair->lo.push_back(s.q1);
      pair->hi.push_back(s.q3);
    }
  }
  if (x.empty()) return;
  write_file(root / "corr_vs_n.svg", svg_chart("Correlation across replicates", "correlation", x, {c2, c3}, 0.0));
  write_file(root / "ratio_vs_n.svg", svg_chart("Ratio median (bar: IQR)", "ratio", x, {r2, r3}, 1.0));
}

}  // namespace fracmax::report
