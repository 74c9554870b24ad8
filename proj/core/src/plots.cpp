#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "doclab/format.hpp"
#include "doclab/report.hpp"

namespace doclab {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kMarginLeft = 62.0;
constexpr double kMarginRight = 18.0;
constexpr double kMarginTop = 36.0;
constexpr double kMarginBottom = 48.0;

// Maps data coordinates onto the plot area of a fixed-size SVG.
struct Frame {
  double x0, x1, y0, y1;  // data ranges

  double sx(double x) const {
    return kMarginLeft + (x - x0) / (x1 - x0) * (kWidth - kMarginLeft - kMarginRight);
  }
  double sy(double y) const {
    return kHeight - kMarginBottom -
           (y - y0) / (y1 - y0) * (kHeight - kMarginTop - kMarginBottom);
  }
};

void open_svg(std::ostringstream& s, const std::string& title) {
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
    << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
    << kHeight << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
}

void axes(std::ostringstream& s, const Frame& f, const std::string& x_label,
          const std::string& y_label, int x_ticks, int y_ticks) {
  s << "<g stroke=\"black\" stroke-width=\"1\" font-family=\"sans-serif\" "
       "font-size=\"11\">\n";
  s << "<line x1=\"" << f.sx(f.x0) << "\" y1=\"" << f.sy(f.y0) << "\" x2=\""
    << f.sx(f.x1) << "\" y2=\"" << f.sy(f.y0) << "\"/>\n";
  s << "<line x1=\"" << f.sx(f.x0) << "\" y1=\"" << f.sy(f.y0) << "\" x2=\""
    << f.sx(f.x0) << "\" y2=\"" << f.sy(f.y1) << "\"/>\n";
  for (int i = 0; i <= x_ticks; ++i) {
    const double x = f.x0 + (f.x1 - f.x0) * i / x_ticks;
    s << "<line x1=\"" << f.sx(x) << "\" y1=\"" << f.sy(f.y0) << "\" x2=\""
      << f.sx(x) << "\" y2=\"" << f.sy(f.y0) + 4 << "\"/>\n";
    s << "<text x=\"" << f.sx(x) << "\" y=\"" << f.sy(f.y0) + 17
      << "\" text-anchor=\"middle\" stroke=\"none\">" << fmt_double(x)
      << "</text>\n";
  }
  for (int i = 0; i <= y_ticks; ++i) {
    const double y = f.y0 + (f.y1 - f.y0) * i / y_ticks;
    s << "<line x1=\"" << f.sx(f.x0) - 4 << "\" y1=\"" << f.sy(y) << "\" x2=\""
      << f.sx(f.x0) << "\" y2=\"" << f.sy(y) << "\"/>\n";
    s << "<text x=\"" << f.sx(f.x0) - 7 << "\" y=\"" << f.sy(y) + 4
      << "\" text-anchor=\"end\" stroke=\"none\">" << fmt_double(y)
      << "</text>\n";
  }
  s << "<text x=\"" << (kMarginLeft + kWidth - kMarginRight) / 2 << "\" y=\""
    << kHeight - 10 << "\" text-anchor=\"middle\" stroke=\"none\">" << x_label
    << "</text>\n";
  s << "<text x=\"14\" y=\"" << (kMarginTop + kHeight - kMarginBottom) / 2
    << "\" text-anchor=\"middle\" stroke=\"none\" transform=\"rotate(-90 14 "
    << (kMarginTop + kHeight - kMarginBottom) / 2 << ")\">" << y_label
    << "</text>\n";
  s << "</g>\n";
}

double nice_ceiling(double v) {
  if (v <= 0.0) return 1.0;
  const double mag = std::pow(10.0, std::floor(std::log10(v)));
  for (double step : {1.0, 2.0, 2.5, 5.0, 10.0})
    if (v <= step * mag) return step * mag;
  return 10.0 * mag;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string doc_svg(const Report& rep, const DocHistogram& doc) {
  std::ostringstream s;
  open_svg(s, "density of classifiers, " + rep.arch);
  double max_mass = 0.0;
  for (int i = 0; i < doc.bin_count; ++i) max_mass = std::max(max_mass, doc.mass(i));
  Frame f{0.0, 1.0, 0.0, nice_ceiling(max_mass)};
  axes(s, f, "true error E", "normalized mass", 5, 4);
  s << "<g fill=\"steelblue\">\n";
  for (int i = 0; i < doc.bin_count; ++i) {
    const double m = doc.mass(i);
    if (m <= 0.0) continue;
    const double x = f.sx(doc.bin_left(i));
    const double w = f.sx(doc.bin_right(i)) - x;
    const double y = f.sy(m);
    s << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w
      << "\" height=\"" << f.sy(0.0) - y << "\"/>\n";
  }
  s << "</g>\n";
  // e_min marker
  s << "<line x1=\"" << f.sx(rep.e_min_value) << "\" y1=\"" << f.sy(f.y0)
    << "\" x2=\"" << f.sx(rep.e_min_value) << "\" y2=\"" << f.sy(f.y1)
    << "\" stroke=\"red\" stroke-dasharray=\"4 3\"/>\n";
  s << "</svg>\n";
  return s.str();
}

std::string boxplot_svg(const Report& rep) {
  std::ostringstream s;
  open_svg(s, "test error of zero-training-error solutions, " + rep.arch);
  if (rep.per_n.empty()) {
    s << "</svg>\n";
    return s.str();
  }
  double max_err = 0.0;
  for (const auto& row : rep.per_n) max_err = std::max(max_err, row.max);
  Frame f{-0.5, rep.per_n.size() - 0.5, 0.0, nice_ceiling(max_err)};
  s << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  // categorical x axis: one slot per n
  s << "<line x1=\"" << f.sx(f.x0) << "\" y1=\"" << f.sy(0) << "\" x2=\""
    << f.sx(f.x1) << "\" y2=\"" << f.sy(0) << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << f.sx(f.x0) << "\" y1=\"" << f.sy(0) << "\" x2=\""
    << f.sx(f.x0) << "\" y2=\"" << f.sy(f.y1) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = f.y1 * i / 4;
    s << "<text x=\"" << f.sx(f.x0) - 7 << "\" y=\"" << f.sy(y) + 4
      << "\" text-anchor=\"end\">" << fmt_double(y) << "</text>\n";
  }
  for (std::size_t k = 0; k < rep.per_n.size(); ++k) {
    const ReportPerN& row = rep.per_n[k];
    const double cx = f.sx(static_cast<double>(k));
    const double half = 12.0;
    s << "<line x1=\"" << cx << "\" y1=\"" << f.sy(row.min) << "\" x2=\"" << cx
      << "\" y2=\"" << f.sy(row.max) << "\" stroke=\"black\"/>\n";
    s << "<rect x=\"" << cx - half << "\" y=\"" << f.sy(row.q3) << "\" width=\""
      << 2 * half << "\" height=\"" << f.sy(row.q1) - f.sy(row.q3)
      << "\" fill=\"lightsteelblue\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << cx - half << "\" y1=\"" << f.sy(row.median)
      << "\" x2=\"" << cx + half << "\" y2=\"" << f.sy(row.median)
      << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << cx << "\" y=\"" << f.sy(0) + 17
      << "\" text-anchor=\"middle\">" << row.n << "</text>\n";
  }
  s << "<text x=\"" << (kMarginLeft + kWidth - kMarginRight) / 2 << "\" y=\""
    << kHeight - 10 << "\" text-anchor=\"middle\">training set size n</text>\n";
  s << "</g>\n</svg>\n";
  return s.str();
}

std::string comparison_svg(const Report& rep) {
  std::ostringstream s;
  open_svg(s, "mean test error: measured vs DOC prediction, " + rep.arch);
  if (rep.per_n.empty()) {
    s << "</svg>\n";
    return s.str();
  }
  double max_err = 0.0;
  double max_n = 1.0;
  for (const auto& row : rep.per_n) {
    max_err = std::max({max_err, row.mean_test_error, row.predicted_mean_error});
    max_n = std::max(max_n, static_cast<double>(row.n));
  }
  Frame f{0.0, max_n, 0.0, nice_ceiling(max_err)};
  axes(s, f, "training set size n", "mean test error", 5, 4);
  for (const auto& row : rep.per_n) {
    const double x = f.sx(static_cast<double>(row.n));
    const double ye = f.sy(row.mean_test_error);
    const double yp = f.sy(row.predicted_mean_error);
    // measured: red x
    s << "<g stroke=\"crimson\" stroke-width=\"1.5\">"
      << "<line x1=\"" << x - 4 << "\" y1=\"" << ye - 4 << "\" x2=\"" << x + 4
      << "\" y2=\"" << ye + 4 << "\"/>"
      << "<line x1=\"" << x - 4 << "\" y1=\"" << ye + 4 << "\" x2=\"" << x + 4
      << "\" y2=\"" << ye - 4 << "\"/></g>\n";
    // predicted: blue +
    s << "<g stroke=\"royalblue\" stroke-width=\"1.5\">"
      << "<line x1=\"" << x - 5 << "\" y1=\"" << yp << "\" x2=\"" << x + 5
      << "\" y2=\"" << yp << "\"/>"
      << "<line x1=\"" << x << "\" y1=\"" << yp - 5 << "\" x2=\"" << x
      << "\" y2=\"" << yp + 5 << "\"/></g>\n";
  }
  s << "<g font-family=\"sans-serif\" font-size=\"11\">"
    << "<text x=\"" << kWidth - 160 << "\" y=\"" << kMarginTop + 14
    << "\" fill=\"crimson\">x measured</text>"
    << "<text x=\"" << kWidth - 160 << "\" y=\"" << kMarginTop + 30
    << "\" fill=\"royalblue\">+ predicted from DOC</text></g>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace

void emit_plot_data(const Report& rep, const DocHistogram& doc,
                    const std::string& dir) {
  const std::filesystem::path base(dir);

  {
    std::ostringstream s;
    s << "n,min,q1,median,q3,max,mean,successes,exhausted\n";
    for (const ReportPerN& row : rep.per_n) {
      s << row.n << ',' << fmt_double(row.min) << ',' << fmt_double(row.q1) << ','
        << fmt_double(row.median) << ',' << fmt_double(row.q3) << ','
        << fmt_double(row.max) << ',' << fmt_double(row.mean_test_error) << ','
        << row.successes << ',' << row.exhausted << '\n';
    }
    write_file(base / "boxplot.csv", s.str());
  }
  {
    std::ostringstream s;
    s << "n,empirical_mean_error,empirical_sigma,predicted_mean_error\n";
    for (const ReportPerN& row : rep.per_n) {
      s << row.n << ',' << fmt_double(row.mean_test_error) << ','
        << fmt_double(row.mean_sigma) << ','
        << fmt_double(row.predicted_mean_error) << '\n';
    }
    write_file(base / "comparison.csv", s.str());
  }
  write_file(base / "doc.svg", doc_svg(rep, doc));
  write_file(base / "boxplot.svg", boxplot_svg(rep));
  write_file(base / "comparison.svg", comparison_svg(rep));
}

}  // namespace doclab
