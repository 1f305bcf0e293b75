#include "metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace qfal {

std::string format_compact(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

namespace {

std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", fraction * 100.0);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open " + path + " for writing");
  }
  out << text;
  if (!out) {
    throw IoError("short write to " + path);
  }
}

}  // namespace

std::string records_to_csv(std::span<const MetricsRecord> records) {
  std::ostringstream out;
  out << kRecordsCsvHeader << "\n";
  for (const auto& r : records) {
    out << r.phase << ',' << r.clients << ',' << format_compact(r.coverage)
        << ',' << r.round << ',' << r.split << ','
        << format_compact(r.epsilon) << ',' << format_full(r.loss) << ','
        << format_full(r.accuracy) << "\n";
  }
  return out.str();
}

void write_records_csv(const std::string& path,
                       std::span<const MetricsRecord> records) {
  write_text(path, records_to_csv(records));
}

std::string final_table_csv(
    const std::vector<std::pair<double, std::vector<RobustnessRow>>>& rows,
    std::span<const double> eps_grid) {
  std::ostringstream out;
  out << "coverage";
  for (const double eps : eps_grid) {
    out << ",eps_" << format_compact(eps);
  }
  out << "\n";
  for (const auto& [coverage, cells] : rows) {
    out << format_compact(coverage);
    for (const double eps : eps_grid) {
      const auto it = std::find_if(
          cells.begin(), cells.end(),
          [eps](const RobustnessRow& r) { return r.epsilon == eps; });
      if (it == cells.end()) {
        throw FormatError("final table missing cell: coverage " +
                          format_compact(coverage) + ", epsilon " +
                          format_compact(eps));
      }
      out << ',' << format_percent(it->accuracy);
    }
    out << "\n";
  }
  return out.str();
}

void write_final_table_csv(
    const std::string& path,
    const std::vector<std::pair<double, std::vector<RobustnessRow>>>& rows,
    std::span<const double> eps_grid) {
  write_text(path, final_table_csv(rows, eps_grid));
}

bool write_convergence_svg(const std::string& path,
                           std::span<const MetricsRecord> phase_records) {
  std::vector<const MetricsRecord*> pts;
  for (const auto& r : phase_records) {
    if (r.split == "clean" && r.epsilon == 0.0) pts.push_back(&r);
  }
  if (pts.size() < 2) {
    std::fprintf(stderr,
                 "warning: skipping %s: need at least 2 rounds, have %zu\n",
                 path.c_str(), pts.size());
    return false;
  }
  std::sort(pts.begin(), pts.end(),
            [](const MetricsRecord* a, const MetricsRecord* b) {
              return a->round < b->round;
            });

  constexpr double width = 640, height = 400;
  constexpr double ml = 60, mr = 60, mt = 30, mb = 45;
  const double plot_w = width - ml - mr;
  const double plot_h = height - mt - mb;
  const int round_lo = pts.front()->round;
  const int round_hi = pts.back()->round;
  double loss_hi = 0.0;
  for (const auto* p : pts) loss_hi = std::max(loss_hi, p->loss);
  if (loss_hi <= 0.0) loss_hi = 1.0;
  loss_hi *= 1.05;

  auto x_of = [&](int round) {
    return ml + plot_w * (round - round_lo) /
                    std::max(1, round_hi - round_lo);
  };
  auto y_of_loss = [&](double v) { return mt + plot_h * (1.0 - v / loss_hi); };
  auto y_of_acc = [&](double v) { return mt + plot_h * (1.0 - v); };

  auto polyline = [&](auto&& y_of_value, auto&& value_of,
                      const char* color) {
    std::ostringstream s;
    s << "  <polyline fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.5\" points=\"";
    for (const auto* p : pts) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", x_of(p->round),
                    y_of_value(value_of(p)));
      s << buf;
    }
    s << "\"/>\n";
    return s.str();
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n"
      << "  <rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  // axes
  svg << "  <line x1=\"" << ml << "\" y1=\"" << mt + plot_h << "\" x2=\""
      << ml + plot_w << "\" y2=\"" << mt + plot_h
      << "\" stroke=\"black\"/>\n"
      << "  <line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << mt + plot_h << "\" stroke=\"black\"/>\n"
      << "  <line x1=\"" << ml + plot_w << "\" y1=\"" << mt << "\" x2=\""
      << ml + plot_w << "\" y2=\"" << mt + plot_h
      << "\" stroke=\"black\"/>\n";
  // labels and ticks
  svg << "  <text x=\"" << ml + plot_w / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\" font-size=\"13\">round</text>\n"
      << "  <text x=\"15\" y=\"" << mt + plot_h / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 "
         "15 "
      << mt + plot_h / 2 << ")\">loss</text>\n"
      << "  <text x=\"" << width - 15 << "\" y=\"" << mt + plot_h / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(90 "
      << width - 15 << " " << mt + plot_h / 2 << ")\">accuracy</text>\n";
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "  <text x=\"%.0f\" y=\"%.0f\" text-anchor=\"end\" "
                "font-size=\"11\">%.3f</text>\n",
                ml - 5, mt + 10, loss_hi);
  svg << buf;
  std::snprintf(buf, sizeof(buf),
                "  <text x=\"%.0f\" y=\"%.0f\" text-anchor=\"end\" "
                "font-size=\"11\">0</text>\n",
                ml - 5, mt + plot_h);
  svg << buf;
  std::snprintf(buf, sizeof(buf),
                "  <text x=\"%.0f\" y=\"%.0f\" font-size=\"11\">1.0</text>\n",
                ml + plot_w + 5, mt + 10);
  svg << buf;
  std::snprintf(buf, sizeof(buf),
                "  <text x=\"%.0f\" y=\"%.0f\" font-size=\"11\">0.0</text>\n",
                ml + plot_w + 5, mt + plot_h);
  svg << buf;
  std::snprintf(buf, sizeof(buf),
                "  <text x=\"%.0f\" y=\"%.0f\" text-anchor=\"middle\" "
                "font-size=\"11\">%d</text>\n",
                ml, mt + plot_h + 15, round_lo);
  svg << buf;
  std::snprintf(buf, sizeof(buf),
                "  <text x=\"%.0f\" y=\"%.0f\" text-anchor=\"middle\" "
                "font-size=\"11\">%d</text>\n",
                ml + plot_w, mt + plot_h + 15, round_hi);
  svg << buf;

  svg << polyline(y_of_loss, [](const MetricsRecord* p) { return p->loss; },
                  "#c0392b");
  svg << polyline(y_of_acc,
                  [](const MetricsRecord* p) { return p->accuracy; },
                  "#2980b9");
  // legend
  svg << "  <text x=\"" << ml + 10 << "\" y=\"" << mt + 15
      << "\" font-size=\"12\" fill=\"#c0392b\">loss</text>\n"
      << "  <text x=\"" << ml + 50 << "\" y=\"" << mt + 15
      << "\" font-size=\"12\" fill=\"#2980b9\">accuracy</text>\n";
  svg << "</svg>\n";

  write_text(path, svg.str());
  return true;
}

}  // namespace qfal
