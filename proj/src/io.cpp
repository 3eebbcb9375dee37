#include "hefs/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hefs/errors.hpp"

namespace hefs {

using ordered_json = nlohmann::ordered_json;

namespace {

double get_num(const nlohmann::json& j, const char* key, double fallback, bool required = false) {
    if (!j.contains(key)) {
        if (required) throw config_error(std::string("missing required field '") + key + "'");
        return fallback;
    }
    if (!j.at(key).is_number()) throw config_error(std::string("field '") + key + "' must be a number");
    return j.at(key).get<double>();
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

waveform_spec waveform_spec_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& ex) {
        throw data_error(std::string("waveform spec JSON parse error: ") + ex.what());
    }
    waveform_spec spec;
    spec.sampling.power_frequency_hz = get_num(j, "power_frequency_hz", 50.0);
    spec.sampling.rate_hz = get_num(j, "sample_rate_hz", 1200.0);
    spec.sampling.duration_s = get_num(j, "duration_s", 1.0);
    spec.noise.sigma = get_num(j, "noise_sigma", 0.0);
    if (j.contains("seed")) spec.noise.seed = j.at("seed").get<std::uint64_t>();
    if (!j.contains("harmonics") || !j.at("harmonics").is_array())
        throw config_error("waveform spec needs a 'harmonics' array");
    for (const auto& h : j.at("harmonics")) {
        harmonic_component c;
        c.order = static_cast<int>(get_num(h, "order", 0, true));
        c.amplitude_pu = get_num(h, "amplitude_pu", 0.0, true);
        c.phase_rad = deg_to_rad(get_num(h, "phase_deg", 0.0));
        spec.harmonics.push_back(c);
    }
    if (j.contains("flickers")) {
        for (const auto& f : j.at("flickers")) {
            flicker_component c;
            c.frequency_hz = get_num(f, "frequency_hz", 0.0, true);
            c.relative_amplitude = get_num(f, "relative_amplitude", 0.0, true);
            c.phase_rad = deg_to_rad(get_num(f, "phase_deg", 0.0));
            spec.flickers.push_back(c);
        }
    }
    validate(spec);
    return spec;
}

std::string waveform_spec_to_json(const waveform_spec& spec) {
    ordered_json j;
    j["power_frequency_hz"] = spec.sampling.power_frequency_hz;
    j["sample_rate_hz"] = spec.sampling.rate_hz;
    j["duration_s"] = spec.sampling.duration_s;
    j["noise_sigma"] = spec.noise.sigma;
    j["seed"] = spec.noise.seed;
    j["harmonics"] = ordered_json::array();
    for (const auto& h : spec.harmonics)
        j["harmonics"].push_back({{"order", h.order},
                                  {"amplitude_pu", h.amplitude_pu},
                                  {"phase_deg", rad_to_deg(h.phase_rad)}});
    j["flickers"] = ordered_json::array();
    for (const auto& f : spec.flickers)
        j["flickers"].push_back({{"frequency_hz", f.frequency_hz},
                                 {"relative_amplitude", f.relative_amplitude},
                                 {"phase_deg", rad_to_deg(f.phase_rad)}});
    return j.dump(2);
}

pipeline_config pipeline_config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& ex) {
        throw data_error(std::string("pipeline config JSON parse error: ") + ex.what());
    }
    pipeline_config cfg;
    if (j.contains("hinf")) {
        const auto& h = j.at("hinf");
        cfg.hinf.alpha = get_num(h, "alpha", cfg.hinf.alpha);
        cfg.hinf.measurement_noise = get_num(h, "measurement_noise", cfg.hinf.measurement_noise);
        cfg.hinf.initial_covariance_scale =
            get_num(h, "initial_covariance_scale", cfg.hinf.initial_covariance_scale);
        cfg.hinf.process_noise = get_num(h, "process_noise", cfg.hinf.process_noise);
        if (h.contains("harmonic_orders"))
            cfg.hinf.harmonic_orders = h.at("harmonic_orders").get<std::vector<int>>();
        if (h.contains("initial_state"))
            cfg.hinf.initial_state = h.at("initial_state").get<std::vector<double>>();
        if (h.contains("pd_check_warmup"))
            cfg.hinf.pd_check_warmup = h.at("pd_check_warmup").get<std::int64_t>();
    }
    if (j.contains("adaline")) {
        const auto& a = j.at("adaline");
        cfg.adaline.initial_rate = get_num(a, "initial_rate", cfg.adaline.initial_rate);
        cfg.adaline.decay = get_num(a, "decay", cfg.adaline.decay);
        cfg.adaline.regularizer = get_num(a, "regularizer", cfg.adaline.regularizer);
        if (a.contains("weight_init")) {
            const std::string mode = a.at("weight_init").get<std::string>();
            if (mode == "zero") cfg.adaline.init = weight_init::zero;
            else if (mode == "table-ones") cfg.adaline.init = weight_init::table_ones;
            else if (mode == "random") cfg.adaline.init = weight_init::random;
            else throw config_error("weight_init must be zero|table-ones|random");
        }
        if (a.contains("weight_seed")) cfg.adaline.init_seed = a.at("weight_seed").get<std::uint64_t>();
        if (a.contains("initial_weights"))
            cfg.adaline.initial_weights = a.at("initial_weights").get<std::vector<double>>();
    }
    if (j.contains("frequency_mode")) {
        const auto& f = j.at("frequency_mode");
        const std::string mode = f.value("mode", "tracked");
        if (mode == "fixed") cfg.frequency.kind = frequency_mode_kind::fixed;
        else if (mode == "tracked") cfg.frequency.kind = frequency_mode_kind::tracked;
        else if (mode == "tracked_with_offset") cfg.frequency.kind = frequency_mode_kind::tracked_with_offset;
        else throw config_error("frequency mode must be fixed|tracked|tracked_with_offset");
        cfg.frequency.fixed_hz = get_num(f, "frequency_hz", cfg.frequency.fixed_hz);
        cfg.frequency.offset_hz = get_num(f, "offset_hz", cfg.frequency.offset_hz);
    }
    if (j.contains("report_stride")) cfg.report_stride = j.at("report_stride").get<int>();
    if (j.contains("compensate_envelope_response"))
        cfg.compensate_envelope_response = j.at("compensate_envelope_response").get<bool>();
    if (j.contains("seed_dc_from_envelope"))
        cfg.seed_dc_from_envelope = j.at("seed_dc_from_envelope").get<bool>();
    return cfg;
}

baseline_config baseline_config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& ex) {
        throw data_error(std::string("baseline config JSON parse error: ") + ex.what());
    }
    baseline_config cfg;
    cfg.window_seconds = get_num(j, "window_seconds", cfg.window_seconds);
    cfg.demodulation_cutoff_hz = get_num(j, "demodulation_cutoff_hz", cfg.demodulation_cutoff_hz);
    return cfg;
}

monte_carlo_spec monte_carlo_spec_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& ex) {
        throw data_error(std::string("monte carlo spec JSON parse error: ") + ex.what());
    }
    monte_carlo_spec spec;
    if (j.contains("base_spec")) {
        spec.base_spec = waveform_spec_from_json(j.at("base_spec").dump());
        if (j.contains("runs")) spec.runs = j.at("runs").get<int>();
        if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("harmonic_range"))
            spec.harmonic_range = j.at("harmonic_range").get<std::array<double, 2>>();
        if (j.contains("flicker_range"))
            spec.flicker_range = j.at("flicker_range").get<std::array<double, 2>>();
    } else {
        spec.base_spec = waveform_spec_from_json(text);
    }
    return spec;
}

sample_series ingest_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open CSV file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw data_error(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "time_s,voltage_pu")
        throw data_error(path + ":1: expected header 'time_s,voltage_pu', got '" + line + "'");

    std::vector<double> times, values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw data_error(path + ":" + std::to_string(line_no) + ": expected 'time,voltage'");
        try {
            std::size_t used = 0;
            const double t = std::stod(line.substr(0, comma), &used);
            const double v = std::stod(line.substr(comma + 1));
            times.push_back(t);
            values.push_back(v);
        } catch (const std::exception&) {
            throw data_error(path + ":" + std::to_string(line_no) + ": malformed number");
        }
        if (!std::isfinite(times.back()) || !std::isfinite(values.back()))
            throw data_error(path + ":" + std::to_string(line_no) + ": non-finite value");
    }
    if (times.size() < 2) throw data_error(path + ": need at least 2 samples");

    const double dt = times[1] - times[0];
    if (dt <= 0.0) throw data_error(path + ":3: non-increasing time");
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double step = times[i] - times[i - 1];
        if (step <= 0.0)
            throw data_error(path + ":" + std::to_string(i + 2) + ": non-increasing time");
        if (std::abs(step - dt) > 1e-6 * dt)
            throw data_error(path + ":" + std::to_string(i + 2) + ": non-uniform sample spacing (" +
                             fmt(step) + " vs " + fmt(dt) + ")");
    }

    sample_series out;
    out.rate_hz = 1.0 / dt;
    out.start_index = static_cast<std::int64_t>(std::llround(times[0] / dt));
    out.samples = std::move(values);
    return out;
}

void emit_series_csv(const sample_series& series, const std::string& path) {
    std::ostringstream os;
    os << "time_s,voltage_pu\n";
    char buf[96];
    for (std::size_t i = 0; i < series.samples.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.17g\n", series.time_at(i), series.samples[i]);
        os << buf;
    }
    write_text_file_atomic(path, os.str());
}

void emit_trace_csv(const flicker_report& report, const std::string& path) {
    std::ostringstream os;
    os << "time_s";
    for (std::size_t i = 1; i <= report.harmonic_orders.size(); ++i) os << ",envelope_" << i;
    os << "\n";
    char buf[40];
    for (std::size_t k = 0; k < report.trace_time_s.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.12g", report.trace_time_s[k]);
        os << buf;
        for (const double v : report.trace_envelopes[k]) {
            std::snprintf(buf, sizeof(buf), ",%.17g", v);
            os << buf;
        }
        os << "\n";
    }
    write_text_file_atomic(path, os.str());
}

namespace {

ordered_json report_to_ordered_json(const flicker_report& rep) {
    ordered_json j;
    j["frequency"] = {{"mode", rep.frequency_mode_label},
                      {"estimate_hz", rep.frequency_hz},
                      {"confidence_window_hz", rep.frequency_confidence_hz}};
    j["harmonics"] = ordered_json::array();
    for (std::size_t i = 0; i < rep.harmonic_orders.size(); ++i)
        j["harmonics"].push_back({{"order", rep.harmonic_orders[i]},
                                  {"amplitude_pu", rep.harmonic_amplitudes[i]},
                                  {"phase_deg", rad_to_deg(rep.harmonic_phases_rad[i])},
                                  {"adaline_dc_pu", rep.adaline_dc[i]}});
    j["primary_envelope"] = rep.primary_envelope;
    j["relative_amplitudes"] = rep.relative_amplitudes;
    ordered_json phases = ordered_json::array();
    for (const auto& ch : rep.flicker_phases_rad) {
        ordered_json row = ordered_json::array();
        for (const double p : ch) row.push_back(rad_to_deg(p));
        phases.push_back(row);
    }
    j["flicker_phases_deg"] = phases;
    // Amplitude-ratio proxy index, not a flickermeter block-4 output.
    j["sensation"] = {{"kind", "s_proxy"},
                      {"reference_table", rep.sensation_index.reference_table},
                      {"contributions", rep.sensation_index.contributions},
                      {"total", rep.sensation_index.total}};
    j["convergence_time_s"] = rep.convergence_time_s;
    j["envelope_response"] = {{"compensated", rep.response_compensated},
                              {"gain", rep.response.gain},
                              {"phase_deg", [&] {
                                   std::array<double, kGridSize> d{};
                                   for (std::size_t i = 0; i < kGridSize; ++i)
                                       d[i] = rad_to_deg(rep.response.phase_rad[i]);
                                   return d;
                               }()}};
    j["samples_processed"] = rep.samples_processed;
    return j;
}

ordered_json stats_to_json(const error_stats& st) {
    return {{"mean", st.mean}, {"variance_population", st.variance}, {"mse", st.mse},
            {"max_abs", st.max_abs}};
}

}  // namespace

std::string flicker_report_to_json(const flicker_report& report) {
    ordered_json j = report_to_ordered_json(report);
    j["timing"] = {{"estimation_seconds_final_2s", report.estimation_seconds_final_2s},
                   {"estimation_seconds_total", report.estimation_seconds_total}};
    return j.dump(2);
}

std::string comparison_report_to_json(const comparison_report& report) {
    ordered_json j;
    j["hefs"] = report_to_ordered_json(report.hefs);
    ordered_json f;
    f["v1_pu"] = report.fft.v1;
    f["relative_amplitudes"] = report.fft.relative_amplitudes;
    std::array<double, kGridSize> pd{};
    for (std::size_t i = 0; i < kGridSize; ++i) pd[i] = rad_to_deg(report.fft.phases_rad[i]);
    f["phases_deg"] = pd;
    j["fft_baseline"] = f;
    if (report.has_truth) {
        j["envelope_reconstruction_final_2s"] = {
            {"hefs", stats_to_json(report.hefs_envelope_stats)},
            {"fft", stats_to_json(report.fft_envelope_stats)}};
    }
    j["timing"] = {{"hefs_seconds_final_2s", report.hefs_seconds_final_2s},
                   {"fft_seconds", report.fft_seconds}};
    return j.dump(2);
}

void emit_mc_csv(const std::vector<mc_result>& results, const std::string& path) {
    std::ostringstream os;
    os << "run_id,s_error_pct,envelope_error_pct\n";
    char buf[96];
    for (const auto& r : results) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", r.run_id, r.s_error_pct,
                      r.envelope_error_pct);
        os << buf;
    }
    write_text_file_atomic(path, os.str());
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw data_error("cannot write file: " + tmp);
        out << content;
        if (!out.good()) throw data_error("write failed: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw data_error("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

}  // namespace hefs
