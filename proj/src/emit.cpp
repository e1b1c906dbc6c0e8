#include "denseam/emit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

namespace denseam {

const char* const kCellsCsvHeader =
    "experiment,scale,eta0,seed,epoch,mse,mse_per_dim,lambda_max,lambda2,"
    "lambda_max_raw,lambda2_raw,k_eff,k_eff_centered,rms_z,rms_f,rms_dw1,"
    "rms_dw2,rms_dz1,rms_dz2,rms_df11,rms_df12,rms_df21,rms_df22,rms_db,"
    "rms_dc,adam_update_rms,adam_row_mean_rms,diverged";

const char* const kSummaryCsvHeader =
    "experiment,scale,eta0,seed,final_mse,final_mse_per_dim,diverged,"
    "diverged_epoch,n,k,p,b,s1,s2,eta_w";

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string field(double v) {
  return std::isfinite(v) ? format_full(v) : std::string();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  return out;
}

}  // namespace

void emit_csv(const ExperimentConfig& config, const SweepResult& result,
              const std::string& path) {
  std::ofstream out = open_out(path);
  out << kCellsCsvHeader << "\n";
  for (const CellResult& cell : result.cells) {
    std::map<long, const DiagnosticsRecord*> by_epoch;
    for (const DiagnosticsRecord& rec : cell.diagnostics) {
      by_epoch[rec.epoch] = &rec;
    }
    const long epochs = static_cast<long>(cell.mse_trace.size());
    for (long epoch = 0; epoch < epochs; ++epoch) {
      const auto it = by_epoch.find(epoch);
      const DiagnosticsRecord* rec =
          it != by_epoch.end() ? it->second : nullptr;
      out << config.id << ',' << cell.scale << ',' << format_full(cell.eta0)
          << ',' << cell.seed << ',' << epoch << ','
          << field(cell.mse_trace[static_cast<std::size_t>(epoch)]) << ','
          << field(cell.mse_per_dim_trace[static_cast<std::size_t>(epoch)]);
      if (rec) {
        out << ',' << field(rec->lambda_max) << ',' << field(rec->lambda2)
            << ',' << field(rec->lambda_max_raw) << ','
            << field(rec->lambda2_raw) << ',' << field(rec->k_eff) << ','
            << field(rec->k_eff_centered) << ',' << field(rec->rms_z) << ','
            << field(rec->rms_f) << ',' << field(rec->rms_dw1) << ','
            << field(rec->rms_dw2) << ',' << field(rec->rms_dz1) << ','
            << field(rec->rms_dz2) << ',' << field(rec->rms_df11) << ','
            << field(rec->rms_df12) << ',' << field(rec->rms_df21) << ','
            << field(rec->rms_df22) << ',' << field(rec->rms_db) << ','
            << field(rec->rms_dc) << ',' << field(rec->adam_update_rms) << ','
            << field(rec->adam_row_mean_rms);
      } else {
        for (int i = 0; i < 20; ++i) out << ',';
      }
      out << ',' << (cell.diverged && epoch + 1 == epochs ? 1 : 0) << "\n";
    }
    if (epochs == 0 && cell.diverged) {
      out << config.id << ',' << cell.scale << ',' << format_full(cell.eta0)
          << ',' << cell.seed << ',' << 0 << ",,";
      for (int i = 0; i < 20; ++i) out << ',';
      out << ",1\n";
    }
  }
}

void emit_summary_csv(const ExperimentConfig& config,
                      const SweepResult& result, const std::string& path) {
  std::ofstream out = open_out(path);
  out << kSummaryCsvHeader << "\n";
  for (const CellResult& cell : result.cells) {
    out << config.id << ',' << cell.scale << ',' << format_full(cell.eta0)
        << ',' << cell.seed << ',' << field(cell.final_mse) << ','
        << field(cell.final_mse / static_cast<double>(cell.dims.n)) << ','
        << (cell.diverged ? 1 : 0) << ',' << cell.diverged_epoch << ','
        << cell.dims.n << ',' << cell.dims.k << ',' << cell.dims.p << ','
        << cell.dims.b << ',' << format_full(cell.presc.s1) << ','
        << format_full(cell.presc.s2) << ',' << format_full(cell.presc.etaW)
        << "\n";
  }
  out << "\n# per-scale argmin\nscale,argmin_eta0,min_final_mse,min_unstable_eta0\n";
  for (const ScaleSummary& s : result.summaries) {
    out << s.scale << ',' << field(s.argmin_eta0) << ','
        << field(s.min_final_mse) << ',' << field(s.min_unstable_eta0) << "\n";
  }
}

namespace {

struct Frame {
  static constexpr double width = 760, height = 480;
  static constexpr double left = 70, right = 730, top = 30, bottom = 430;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;

  double sx(double x) const {
    return left + (x - xmin) / (xmax - xmin) * (right - left);
  }
  double sy(double y) const {
    return bottom - (y - ymin) / (ymax - ymin) * (bottom - top);
  }
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

void svg_header(std::ofstream& out, const std::string& title) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Frame::width
      << "\" height=\"" << Frame::height << "\" viewBox=\"0 0 " << Frame::width
      << " " << Frame::height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << Frame::width / 2
      << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">"
      << title << "</text>\n";
}

void svg_axes(std::ofstream& out, const Frame& f, const std::string& xlabel,
              const std::string& ylabel) {
  out << "<line x1=\"" << f.left << "\" y1=\"" << f.bottom << "\" x2=\""
      << f.right << "\" y2=\"" << f.bottom
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n"
      << "<line x1=\"" << f.left << "\" y1=\"" << f.top << "\" x2=\"" << f.left
      << "\" y2=\"" << f.bottom << "\" stroke=\"black\" stroke-width=\"1\"/>\n"
      << "<text x=\"" << (f.left + f.right) / 2 << "\" y=\""
      << f.bottom + 35
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">"
      << xlabel << "</text>\n"
      << "<text x=\"18\" y=\"" << (f.top + f.bottom) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\" transform=\"rotate(-90 18 "
      << (f.top + f.bottom) / 2 << ")\">" << ylabel << "</text>\n";
}

void svg_polyline(std::ofstream& out, const Frame& f,
                  const std::vector<std::pair<double, double>>& pts,
                  const char* color) {
  if (pts.empty()) return;
  out << "<polyline fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.5\" points=\"";
  for (const auto& [x, y] : pts) out << f.sx(x) << ',' << f.sy(y) << ' ';
  out << "\"/>\n";
}

void svg_legend(std::ofstream& out, const Frame& f,
                const std::vector<std::pair<std::string, const char*>>& items) {
  double y = f.top + 14;
  for (const auto& [label, color] : items) {
    out << "<line x1=\"" << f.right - 130 << "\" y1=\"" << y - 4 << "\" x2=\""
        << f.right - 105 << "\" y2=\"" << y - 4 << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << f.right - 100 << "\" y=\"" << y
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << label
        << "</text>\n";
    y += 16;
  }
}

double safe_log2(double v) { return std::log2(std::max(v, 1e-300)); }

}  // namespace

void emit_transfer_svg(const ExperimentConfig& config,
                       const SweepResult& result, const std::string& path) {
  std::ofstream out = open_out(path);
  Frame f;
  double ymax = 0;
  f.xmin = 1e300;
  f.xmax = -1e300;
  for (const CellResult& cell : result.cells) {
    f.xmin = std::min(f.xmin, safe_log2(cell.eta0));
    f.xmax = std::max(f.xmax, safe_log2(cell.eta0));
    if (std::isfinite(cell.final_mse)) {
      ymax = std::max(ymax, cell.final_mse / static_cast<double>(cell.dims.n));
    }
  }
  if (f.xmin >= f.xmax) {
    f.xmin -= 1;
    f.xmax += 1;
  }
  f.ymin = 0;
  f.ymax = ymax > 0 ? 1.1 * ymax : 1;
  svg_header(out, config.id + ": final MSE/N vs eta0");
  svg_axes(out, f, "log2(eta0)", "final MSE / N");
  std::vector<std::pair<std::string, const char*>> legend;
  int color_idx = 0;
  for (long scale : config.scale_ladder) {
    const char* color = kPalette[color_idx++ % 8];
    legend.emplace_back("scale " + std::to_string(scale), color);
    // Mean across seeds per eta0.
    std::map<double, std::pair<double, long>> agg;
    for (const CellResult& cell : result.cells) {
      if (cell.scale != scale || !std::isfinite(cell.final_mse)) continue;
      auto& [sum, count] = agg[cell.eta0];
      sum += cell.final_mse / static_cast<double>(cell.dims.n);
      ++count;
    }
    std::vector<std::pair<double, double>> pts;
    for (const auto& [eta0, sc] : agg) {
      pts.emplace_back(safe_log2(eta0), sc.first / sc.second);
    }
    svg_polyline(out, f, pts, color);
  }
  svg_legend(out, f, legend);
  out << "</svg>\n";
}

void emit_trace_svg(const ExperimentConfig& config, const SweepResult& result,
                    const std::string& path) {
  std::ofstream out = open_out(path);
  Frame f;
  double ymax = 0;
  long max_epochs = 1;
  for (const CellResult& cell : result.cells) {
    max_epochs =
        std::max(max_epochs, static_cast<long>(cell.mse_per_dim_trace.size()));
    for (double v : cell.mse_per_dim_trace) {
      if (std::isfinite(v)) ymax = std::max(ymax, v);
    }
  }
  f.xmin = 0;
  f.xmax = static_cast<double>(std::max<long>(max_epochs - 1, 1));
  f.ymin = 0;
  f.ymax = ymax > 0 ? 1.1 * ymax : 1;
  svg_header(out, config.id + ": MSE/N per epoch");
  svg_axes(out, f, "epoch", "MSE / N");
  std::vector<std::pair<std::string, const char*>> legend;
  int color_idx = 0;
  for (long scale : config.scale_ladder) {
    const char* color = kPalette[color_idx++ % 8];
    legend.emplace_back("scale " + std::to_string(scale), color);
    for (const CellResult& cell : result.cells) {
      if (cell.scale != scale) continue;
      std::vector<std::pair<double, double>> pts;
      for (std::size_t e = 0; e < cell.mse_per_dim_trace.size(); ++e) {
        pts.emplace_back(static_cast<double>(e), cell.mse_per_dim_trace[e]);
      }
      svg_polyline(out, f, pts, color);
    }
  }
  svg_legend(out, f, legend);
  out << "</svg>\n";
}

namespace {

void write_image_csv(std::ofstream& out, const std::string& name,
                     const Vector& img) {
  const long side = static_cast<long>(std::lround(std::sqrt(
      static_cast<double>(img.size()))));
  out << "# " << name << " (" << side << "x" << side << ")\n";
  for (long r = 0; r < side; ++r) {
    for (long c = 0; c < side; ++c) {
      if (c) out << ',';
      out << format_full(img[r * side + c]);
    }
    out << "\n";
  }
}

}  // namespace

void emit_denoise_report(const DenoiseComparison& cmp,
                         const std::string& dir_prefix) {
  std::ofstream out = open_out(dir_prefix + "denoise_compare.csv");
  out << "# denoise comparison, block=" << cmp.block << ", steps=" << cmp.steps
      << ", per_pixel_rms=" << format_full(cmp.per_pixel_rms) << "\n";
  write_image_csv(out, "clean", cmp.clean);
  write_image_csv(out, "corrupted", cmp.corrupted);
  write_image_csv(out, "full_denoised", cmp.full_denoised);
  write_image_csv(out, "full_downsampled", cmp.full_downsampled);
  write_image_csv(out, "small_input", cmp.small_input);
  write_image_csv(out, "small_denoised", cmp.small_denoised);
}

}  // namespace denseam
