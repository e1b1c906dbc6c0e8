#pragma once

#include "denseam/harness.hpp"

namespace denseam {

// CSV column order shared by the writers and the round-trip tests. Values
// are printed with 17 significant digits; non-finite or not-applicable
// fields are left empty and divergence is flagged in its own column.
extern const char* const kCellsCsvHeader;
extern const char* const kSummaryCsvHeader;

std::string format_full(double v);

// One row per (cell, recorded epoch): the MSE trace joined with whatever
// diagnostics were probed that epoch.
void emit_csv(const ExperimentConfig& config, const SweepResult& result,
              const std::string& path);

// One row per cell plus per-scale argmin rows.
void emit_summary_csv(const ExperimentConfig& config, const SweepResult& result,
                      const std::string& path);

// Final-MSE vs eta0 (log2 x axis), one polyline per scale.
void emit_transfer_svg(const ExperimentConfig& config,
                       const SweepResult& result, const std::string& path);

// Per-dimension MSE vs epoch overlay, one polyline per scale.
void emit_trace_svg(const ExperimentConfig& config, const SweepResult& result,
                    const std::string& path);

// Grayscale images of a denoising comparison as one CSV (pixel grids) and a
// small summary file.
void emit_denoise_report(const DenoiseComparison& cmp,
                         const std::string& dir_prefix);

}  // namespace denseam
