#pragma once

#include <string>

#include "hefs/baseline_fft.hpp"
#include "hefs/pipeline.hpp"
#include "hefs/signal_model.hpp"

namespace hefs {

// Phases cross the JSON boundary in degrees; everything internal is radians.
waveform_spec waveform_spec_from_json(const std::string& text);
std::string waveform_spec_to_json(const waveform_spec& spec);

pipeline_config pipeline_config_from_json(const std::string& text);
baseline_config baseline_config_from_json(const std::string& text);
monte_carlo_spec monte_carlo_spec_from_json(const std::string& text);

// CSV with header `time_s,voltage_pu`; monotone, uniformly spaced to 1e-6
// relative, finite values. Parse errors carry 1-based line numbers.
sample_series ingest_csv(const std::string& path);
void emit_series_csv(const sample_series& series, const std::string& path);

void emit_trace_csv(const flicker_report& report, const std::string& path);
std::string flicker_report_to_json(const flicker_report& report);
std::string comparison_report_to_json(const comparison_report& report);
void emit_mc_csv(const std::vector<mc_result>& results, const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file_atomic(const std::string& path, const std::string& content);

}  // namespace hefs
