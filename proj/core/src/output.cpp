#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "irsbc/experiments.hpp"
#include "irsbc/version.hpp"

namespace irsbc {

namespace {

std::string fmt(double v, const char* spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << body;
  if (!out) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

std::string render_csv(const SweepResult& result) {
  std::ostringstream csv;
  csv << "axis,scheme,eff_snr_db_mean,eff_snr_db_stderr,mse_mean,trials,budget\n";
  for (const SweepRow& row : result.rows) {
    csv << fmt(row.axis) << ',' << row.scheme << ','
        << fmt(row.eff_snr_db_mean) << ',' << fmt(row.eff_snr_db_stderr) << ','
        << (row.mse_mean ? fmt(*row.mse_mean, "%.12g") : "") << ','
        << row.trials << ',' << row.budget << '\n';
  }
  return csv.str();
}

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (x, y) sorted by x
};

std::string render_svg(const SweepResult& result) {
  // One point per row; for the SNR sweep the x axis is the mean reference
  // SNR of the point, not the swept noise value.
  const bool snr_sweep = result.sweep_kind == "snr-sweep";
  std::vector<Series> series;
  for (const SweepRow& row : result.rows) {
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const Series& s) { return s.label == row.scheme; });
    if (it == series.end()) {
      series.push_back(Series{row.scheme, {}});
      it = std::prev(series.end());
    }
    const double x = snr_sweep
                         ? result.mean_reference_snr_db[row.point_index]
                         : row.axis;
    it->points.emplace_back(x, row.eff_snr_db_mean);
  }
  for (Series& s : series) {
    std::sort(s.points.begin(), s.points.end());
  }

  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
  bool first = true;
  for (const Series& s : series) {
    for (const auto& [x, y] : s.points) {
      if (first) {
        x_min = x_max = x;
        y_min = y_max = y;
        first = false;
      } else {
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
      }
    }
  }
  if (x_max - x_min < 1e-12) x_max = x_min + 1.0;
  if (y_max - y_min < 1e-12) y_max = y_min + 1.0;
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  const double width = 760.0, height = 480.0;
  const double ml = 70.0, mr = 160.0, mt = 30.0, mb = 55.0;
  const auto sx = [&](double x) {
    return ml + (x - x_min) / (x_max - x_min) * (width - ml - mr);
  };
  const auto sy = [&](double y) {
    return height - mb - (y - y_min) / (y_max - y_min) * (height - mt - mb);
  };

  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                   "#9467bd", "#ff7f0e", "#8c564b",
                                   "#e377c2", "#7f7f7f"};
  const std::string x_label = snr_sweep ? "Reference SNR (dB)"
                                        : "Number of IRS subsurfaces";

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  svg << "<g font-family=\"sans-serif\" font-size=\"12\">\n";

  // Axes and ticks.
  svg << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\""
      << width - mr << "\" y2=\"" << height - mb
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double xt = x_min + (x_max - x_min) * i / ticks;
    const double yt = y_min + (y_max - y_min) * i / ticks;
    svg << "<line x1=\"" << fmt(sx(xt), "%.2f") << "\" y1=\"" << height - mb
        << "\" x2=\"" << fmt(sx(xt), "%.2f") << "\" y2=\"" << height - mb + 5
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fmt(sx(xt), "%.2f") << "\" y=\"" << height - mb + 20
        << "\" text-anchor=\"middle\">" << fmt(xt, "%.4g") << "</text>\n";
    svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << fmt(sy(yt), "%.2f")
        << "\" x2=\"" << ml << "\" y2=\"" << fmt(sy(yt), "%.2f")
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << ml - 9 << "\" y=\"" << fmt(sy(yt) + 4, "%.2f")
        << "\" text-anchor=\"end\">" << fmt(yt, "%.4g") << "</text>\n";
  }
  svg << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  svg << "<text x=\"16\" y=\"" << (mt + height - mb) / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (mt + height - mb) / 2 << ")\">Effective SNR (dB)</text>\n";

  // Series polylines and legend.
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % std::size(kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : series[i].points) {
      svg << fmt(sx(x), "%.2f") << ',' << fmt(sy(y), "%.2f") << ' ';
    }
    svg << "\"/>\n";
    for (const auto& [x, y] : series[i].points) {
      svg << "<circle cx=\"" << fmt(sx(x), "%.2f") << "\" cy=\""
          << fmt(sy(y), "%.2f") << "\" r=\"2.5\" fill=\"" << color
          << "\"/>\n";
    }
    const double ly = mt + 16.0 * static_cast<double>(i);
    svg << "<line x1=\"" << width - mr + 10 << "\" y1=\"" << ly << "\" x2=\""
        << width - mr + 34 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"/>\n";
    svg << "<text x=\"" << width - mr + 40 << "\" y=\"" << ly + 4 << "\">"
        << series[i].label << "</text>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

std::string render_meta(const SweepResult& result,
                        const ExperimentConfig& config,
                        const OutputPaths& paths) {
  nlohmann::json meta;
  meta["tool"] = "irsbc";
  meta["version"] = kVersion;
  meta["sweep"] = result.sweep_kind;
  meta["axis_name"] = result.axis_name;
  meta["axis_values"] = result.axis_values;
  meta["mean_reference_snr_db"] = result.mean_reference_snr_db;
  meta["seed"] = config.seed;
  meta["config"] = config.to_json();
  meta["outputs"] = {{"csv", paths.csv.filename().string()},
                     {"svg", paths.svg.filename().string()}};
  return meta.dump(2) + "\n";
}

}  // namespace

OutputPaths OutputPaths::for_sweep(const std::filesystem::path& dir,
                                   const std::string& sweep_kind) {
  std::string base = sweep_kind;
  std::replace(base.begin(), base.end(), '-', '_');
  return OutputPaths{dir / (base + ".csv"), dir / (base + ".svg"),
                     dir / (base + "_meta.json")};
}

std::vector<std::filesystem::path> emit_outputs(const SweepResult& result,
                                                const ExperimentConfig& config,
                                                const OutputPaths& paths) {
  for (const auto& path : {paths.csv, paths.svg, paths.meta}) {
    std::error_code ec;
    const auto parent = path.parent_path();
    if (parent.empty()) continue;
    std::filesystem::create_directories(parent, ec);
    if (ec) {
      throw std::runtime_error("cannot create output directory " +
                               parent.string() + ": " + ec.message());
    }
  }
  write_file(paths.csv, render_csv(result));
  write_file(paths.svg, render_svg(result));
  write_file(paths.meta, render_meta(result, config, paths));
  return {paths.csv, paths.svg, paths.meta};
}

}  // namespace irsbc
