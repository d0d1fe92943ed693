#include "pixvem/svg.hpp"

#include "pixvem/error.hpp"
#include "pixvem/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

namespace pixvem {

PlotKind parse_plot_kind(const std::string& name) {
  if (name == "error_vs_H") return PlotKind::ErrorVsH;
  if (name == "error_vs_dofs") return PlotKind::ErrorVsDofs;
  throw Error(ErrorCode::ConfigError, "unknown plot kind '" + name + "'");
}

void plot_svg(const std::string& csv_path, PlotKind kind, const std::string& out_path) {
  const std::vector<ErrorRecord> records = read_csv(csv_path);
  if (records.empty()) throw Error(ErrorCode::ParseError, csv_path + ": no rows");
  auto xval = [&](const ErrorRecord& r) {
    return kind == PlotKind::ErrorVsH ? r.H : static_cast<double>(r.active_dofs);
  };
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& r : records) {
    xmin = std::min(xmin, std::log10(xval(r)));
    xmax = std::max(xmax, std::log10(xval(r)));
    for (double e : {r.e0, r.e1}) {
      if (!(e > 0.0)) continue;
      ymin = std::min(ymin, std::log10(e));
      ymax = std::max(ymax, std::log10(e));
    }
  }
  xmin = std::floor(xmin);
  xmax = std::max(std::ceil(xmax), xmin + 1.0);
  ymin = std::floor(ymin);
  ymax = std::max(std::ceil(ymax), ymin + 1.0);

  const double W = 640, Hh = 480, L = 70, R = 180, T = 20, B = 50;
  auto px = [&](double x) { return L + (std::log10(x) - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double y) { return T + (ymax - std::log10(y)) / (ymax - ymin) * (Hh - T - B); };

  std::ofstream out(out_path);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + out_path);
  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << Hh
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\""
      << Hh - T - B << "\" fill=\"none\" stroke=\"#000\"/>\n";
  for (double d = xmin; d <= xmax + 1e-9; d += 1.0) {
    const double x = px(std::pow(10.0, d));
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ddd\"/>"
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">1e%g</text>\n",
                  x, T, x, Hh - B, x, Hh - B + 15, d);
    out << buf;
  }
  for (double d = ymin; d <= ymax + 1e-9; d += 1.0) {
    const double y = py(std::pow(10.0, d));
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ddd\"/>"
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">1e%g</text>\n",
                  L, y, W - R, y, L - 5, y + 4, d);
    out << buf;
  }
  out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << Hh - 10 << "\" text-anchor=\"middle\">"
      << (kind == PlotKind::ErrorVsH ? "H" : "active DOFs") << "</text>\n";

  std::map<std::pair<int, double>, std::vector<ErrorRecord>> series;
  for (const auto& r : records) series[{r.k, r.tau_hat}].push_back(r);
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  int idx = 0;
  for (auto& [key, rs] : series) {
    std::sort(rs.begin(), rs.end(),
              [&](const ErrorRecord& a, const ErrorRecord& b) { return xval(a) < xval(b); });
    const char* color = colors[idx % 8];
    for (int which = 0; which < 2; ++which) {
      std::vector<double> xs, es;
      for (const auto& r : rs) {
        const double e = which == 0 ? r.e1 : r.e0;
        if (e > 0.0) {
          xs.push_back(xval(r));
          es.push_back(e);
        }
      }
      if (xs.empty()) continue;
      if (xs.size() > 1) {
        out << "<polyline fill=\"none\" stroke=\"" << color << "\""
            << (which == 1 ? " stroke-dasharray=\"5,3\"" : "") << " points=\"";
        for (std::size_t i = 0; i < xs.size(); ++i) out << px(xs[i]) << ',' << py(es[i]) << ' ';
        out << "\"/>\n";
      }
      for (std::size_t i = 0; i < xs.size(); ++i) {
        std::snprintf(buf, sizeof buf, "<circle cx=\"%.1f\" cy=\"%.1f\" r=\"3\" fill=\"%s\"/>\n",
                      px(xs[i]), py(es[i]), color);
        out << buf;
      }
      std::string label = std::string(which == 0 ? "e1" : "e0");
      std::snprintf(buf, sizeof buf, " k=%d tau=%g", key.first, key.second);
      label += buf;
      if (xs.size() > 1) {
        std::snprintf(buf, sizeof buf, " slope %.2f", fit_slope(xs, es));
        label += buf;
      }
      std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" fill=\"%s\">%s</text>\n",
                    W - R + 8, T + 14.0 * (2 * idx + which + 1), color, label.c_str());
      out << buf;
    }
    ++idx;
  }
  out << "</svg>\n";
}

}  // namespace pixvem
