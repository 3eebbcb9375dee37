#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hefs/errors.hpp"
#include "hefs/io.hpp"
#include "hefs/pipeline.hpp"
#include "hefs/signal_model.hpp"

namespace {

int run_synth(const std::string& spec_path, const std::string& out_path) {
    const auto spec = hefs::waveform_spec_from_json(hefs::read_text_file(spec_path));
    const auto series = hefs::synthesize(spec);
    hefs::emit_series_csv(series, out_path);
    std::printf("synth: %zu samples at %.6g Hz -> %s\n", series.samples.size(), series.rate_hz,
                out_path.c_str());
    return 0;
}

hefs::pipeline_config load_config(const std::string& path) {
    if (path.empty()) return hefs::pipeline_config{};
    return hefs::pipeline_config_from_json(hefs::read_text_file(path));
}

int run_estimate(const std::string& input, const std::string& config_path, const std::string& out,
                 const std::string& trace) {
    const auto series = hefs::ingest_csv(input);
    const auto config = load_config(config_path);
    const auto report = hefs::run_hefs(series, config);
    hefs::write_text_file_atomic(out, hefs::flicker_report_to_json(report));
    if (!trace.empty()) hefs::emit_trace_csv(report, trace);
    std::printf("estimate: %lld samples, f=%.6g Hz, S=%.6g -> %s\n",
                static_cast<long long>(report.samples_processed), report.frequency_hz,
                report.sensation_index.total, out.c_str());
    return 0;
}

int run_mc(const std::string& spec_path, const std::string& config_path, int runs,
           std::uint64_t seed, bool runs_set, bool seed_set, int workers, const std::string& out) {
    auto spec = hefs::monte_carlo_spec_from_json(hefs::read_text_file(spec_path));
    if (runs_set) spec.runs = runs;
    if (seed_set) spec.seed = seed;
    auto config = load_config(config_path);
    if (!config.hinf.harmonic_orders.empty() && config.hinf.harmonic_orders == std::vector<int>{1}) {
        // Default orders follow the template when the config does not pin them.
        config.hinf.harmonic_orders.clear();
        for (const auto& h : spec.base_spec.harmonics) config.hinf.harmonic_orders.push_back(h.order);
    }
    const auto results = hefs::monte_carlo(spec, config, workers);
    hefs::emit_mc_csv(results, out);
    int failed = 0;
    double worst = 0.0;
    for (const auto& r : results) {
        if (r.failed) ++failed;
        else worst = std::max(worst, r.s_error_pct);
    }
    std::printf("mc: %d runs (%d failed), worst S error %.6g%% -> %s\n", spec.runs, failed, worst,
                out.c_str());
    return 0;
}

int run_compare(const std::string& input, const std::string& config_path,
                const std::string& baseline_path, const std::string& truth_path,
                const std::string& out) {
    const auto series = hefs::ingest_csv(input);
    const auto config = load_config(config_path);
    hefs::baseline_config baseline;
    if (!baseline_path.empty())
        baseline = hefs::baseline_config_from_json(hefs::read_text_file(baseline_path));
    std::optional<hefs::waveform_spec> truth;
    if (!truth_path.empty())
        truth = hefs::waveform_spec_from_json(hefs::read_text_file(truth_path));
    const auto report = hefs::compare(series, config, baseline, truth);
    hefs::write_text_file_atomic(out, hefs::comparison_report_to_json(report));
    if (report.has_truth)
        std::printf("compare: hefs mse %.6g vs fft mse %.6g -> %s\n", report.hefs_envelope_stats.mse,
                    report.fft_envelope_stats.mse, out.c_str());
    else
        std::printf("compare: no truth spec given, estimates only -> %s\n", out.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hefs: hybrid envelope flicker estimation"};
    app.require_subcommand(1);

    std::string spec_path, input, config_path, baseline_path, truth_path, out, trace;
    int runs = 100;
    std::uint64_t seed = 0;
    int workers = 1;

    auto* synth = app.add_subcommand("synth", "synthesize a waveform spec to CSV");
    synth->add_option("--spec", spec_path, "waveform spec JSON")->required();
    synth->add_option("--out", out, "output CSV path")->required();

    auto* estimate = app.add_subcommand("estimate", "run the estimation pipeline on a CSV");
    estimate->add_option("--input", input, "input CSV (time_s,voltage_pu)")->required();
    estimate->add_option("--config", config_path, "pipeline config JSON");
    estimate->add_option("--out", out, "output report JSON")->required();
    estimate->add_option("--trace", trace, "per-step envelope trace CSV");

    auto* mc = app.add_subcommand("mc", "Monte Carlo campaign");
    mc->add_option("--spec", spec_path, "base waveform spec or campaign spec JSON")->required();
    mc->add_option("--config", config_path, "pipeline config JSON");
    auto* runs_opt = mc->add_option("--runs", runs, "number of runs");
    auto* seed_opt = mc->add_option("--seed", seed, "campaign seed");
    mc->add_option("--workers", workers, "worker threads");
    mc->add_option("--out", out, "output CSV path")->required();

    auto* cmp = app.add_subcommand("compare", "HEFS vs spectral baseline on identical input");
    cmp->add_option("--input", input, "input CSV")->required();
    cmp->add_option("--config", config_path, "pipeline config JSON");
    cmp->add_option("--baseline", baseline_path, "baseline config JSON");
    cmp->add_option("--truth-spec", truth_path, "generating waveform spec for error stats");
    cmp->add_option("--out", out, "output JSON path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return run_synth(spec_path, out);
        if (estimate->parsed()) return run_estimate(input, config_path, out, trace);
        if (mc->parsed())
            return run_mc(spec_path, config_path, runs, seed, runs_opt->count() > 0,
                          seed_opt->count() > 0, workers, out);
        if (cmp->parsed()) return run_compare(input, config_path, baseline_path, truth_path, out);
    } catch (const hefs::error& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return static_cast<int>(ex.code());
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return static_cast<int>(hefs::exit_code::numeric);
    }
    return 0;
}
