#include "hefs/pipeline.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <thread>

#include "hefs/errors.hpp"
#include "hefs/frequency_tracker.hpp"
#include "hefs/rng.hpp"

namespace hefs {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

double resolve_frequency(const sample_series& series, const pipeline_config& config,
                         double* confidence, std::string* label) {
    switch (config.frequency.kind) {
        case frequency_mode_kind::fixed:
            if (label) *label = "fixed";
            if (confidence) *confidence = 0.0;
            return config.frequency.fixed_hz;
        case frequency_mode_kind::tracked: {
            const auto est = track_frequency(series, config.frequency.fixed_hz);
            if (label) *label = "tracked";
            if (confidence) *confidence = est.confidence_window_hz;
            return est.frequency_hz;
        }
        case frequency_mode_kind::tracked_with_offset: {
            const auto est = track_frequency(series, config.frequency.fixed_hz);
            if (label) *label = "tracked_with_offset";
            if (confidence) *confidence = est.confidence_window_hz;
            return est.frequency_hz + config.frequency.offset_hz;
        }
    }
    throw config_error("unknown frequency mode");
}

}  // namespace

envelope_response calibrate_envelope_response(const hinf_config& config, double f_hz, double rate_hz,
                                              const flicker_grid& grid) {
    envelope_response resp;
    const double settle_s = 1.0;
    const double measure_s = 2.0;
    const double probe_rel = 0.04;  // envelope-1 modulation amplitude = rel/2

    waveform_spec probe;
    for (int order : config.harmonic_orders) probe.harmonics.push_back({order, 1.0, 0.0});
    probe.sampling.rate_hz = rate_hz;
    probe.sampling.duration_s = settle_s + measure_s;
    probe.sampling.power_frequency_hz = f_hz;
    probe.noise.sigma = 0.0;

    const auto n_settle = static_cast<std::size_t>(std::llround(settle_s * rate_hz));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        probe.flickers = {{grid[i], probe_rel, 0.0}};
        const sample_series z = synthesize_clean(probe);
        const auto frames = run_hinf(config, z.samples, f_hz, rate_hz);

        // LS projection of the channel-1 envelope onto [1, cos, sin] over the
        // measurement window; exact for any (non-integer) cycle count.
        const std::size_t n = frames.size();
        Eigen::MatrixXd a(n - n_settle, 3);
        Eigen::VectorXd y(n - n_settle);
        for (std::size_t k = n_settle; k < n; ++k) {
            const double t = static_cast<double>(k) / rate_hz;
            const double ang = kTwoPi * grid[i] * t;
            a(k - n_settle, 0) = 1.0;
            a(k - n_settle, 1) = std::cos(ang);
            a(k - n_settle, 2) = std::sin(ang);
            y(k - n_settle) = frames[k].envelopes[0];
        }
        const Eigen::Vector3d c = (a.transpose() * a).ldlt().solve(a.transpose() * y);
        const std::complex<double> g(c(1) / (probe_rel / 2.0), -c(2) / (probe_rel / 2.0));
        resp.gain[i] = std::abs(g);
        resp.phase_rad[i] = std::arg(g);
        if (!(resp.gain[i] > 1e-3))
            throw numeric_error("envelope response probe degenerate at " + std::to_string(grid[i]) + " Hz");
    }
    return resp;
}

flicker_report run_hefs(const sample_series& series, const pipeline_config& config,
                        const std::optional<envelope_response>& precalibrated) {
    if (series.samples.empty()) throw data_error("empty sample series");
    if (config.report_stride < 1) throw config_error("report stride must be >= 1");
    const double fs = series.rate_hz;
    const double tau_s = 1.0 / fs;
    const std::size_t n = series.samples.size();
    const std::size_t n_env = config.hinf.harmonic_orders.size();

    flicker_report rep;
    rep.harmonic_orders = config.hinf.harmonic_orders;
    rep.frequency_hz = resolve_frequency(series, config, &rep.frequency_confidence_hz,
                                         &rep.frequency_mode_label);

    if (config.compensate_envelope_response) {
        rep.response = precalibrated ? *precalibrated
                                     : calibrate_envelope_response(config.hinf, rep.frequency_hz, fs,
                                                                   config.grid);
        rep.response_compensated = true;
    } else {
        rep.response.gain.fill(1.0);
        rep.response.phase_rad.fill(0.0);
    }

    hinf_filter filter(config.hinf);
    std::vector<adaline_unit> bank;
    bank.reserve(n_env);
    for (std::size_t i = 0; i < n_env; ++i) bank.emplace_back(config.adaline);
    const std::int64_t engage_step = config.hinf.effective_warmup();
    bool bank_started = false;

    // Primary-channel per-bin estimate history for convergence detection.
    std::vector<std::array<double, kGridSize>> history;
    history.reserve(n);

    const auto final2s_start = n > static_cast<std::size_t>(std::llround(2.0 * fs))
                                   ? n - static_cast<std::size_t>(std::llround(2.0 * fs))
                                   : 0;
    using clock = std::chrono::steady_clock;
    const auto t_begin = clock::now();
    std::chrono::nanoseconds final2s_elapsed{0};

    const flicker_grid& grid = config.grid;
    for (std::size_t k = 0; k < n; ++k) {
        const auto step_begin = clock::now();
        const std::int64_t gk = series.start_index + static_cast<std::int64_t>(k);
        const auto h = structure_row(gk, rep.frequency_hz, tau_s, config.hinf.harmonic_orders);
        filter.step(series.samples[k], h);
        const envelope_frame frame = filter.extract_envelopes();

        if (static_cast<std::int64_t>(k) >= engage_step) {
            if (!bank_started) {
                if (config.seed_dc_from_envelope)
                    for (std::size_t i = 0; i < n_env; ++i) bank[i].seed_dc_weight(frame.envelopes[i]);
                bank_started = true;
            }
            const auto basis = basis_vector(gk, tau_s, grid);
            for (std::size_t i = 0; i < n_env; ++i) bank[i].update(frame.envelopes[i], basis);
            std::array<double, kGridSize> snap{};
            const auto& w = bank[0].state().weights;
            const double vn = std::abs(w[0]);
            if (vn > 1e-9) {
                for (std::size_t i = 0; i < kGridSize; ++i)
                    snap[i] = 2.0 * std::hypot(w[2 + 2 * i], w[3 + 2 * i]) / vn;
            }
            history.push_back(snap);
        }

        if (k % static_cast<std::size_t>(config.report_stride) == 0) {
            rep.trace_time_s.push_back(series.time_at(k));
            rep.trace_envelopes.push_back(frame.envelopes);
        }
        if (k >= final2s_start) final2s_elapsed += clock::now() - step_begin;
    }

    const envelope_frame last = filter.extract_envelopes();
    rep.harmonic_amplitudes = last.envelopes;
    rep.harmonic_phases_rad = last.phases_rad;

    rep.relative_amplitudes.resize(n_env);
    rep.flicker_phases_rad.resize(n_env);
    rep.adaline_dc.resize(n_env);
    for (std::size_t i = 0; i < n_env; ++i) {
        const flicker_estimate est = bank[i].extract(grid);
        rep.adaline_dc[i] = est.harmonic_amplitude;
        for (std::size_t b = 0; b < kGridSize; ++b) {
            rep.relative_amplitudes[i][b] = est.relative_amplitudes[b] / rep.response.gain[b];
            double ph = est.phases_rad[b] - rep.response.phase_rad[b];
            while (ph > 3.14159265358979323846) ph -= kTwoPi;
            while (ph <= -3.14159265358979323846) ph += kTwoPi;
            rep.flicker_phases_rad[i][b] = ph;
        }
    }
    rep.sensation_index = sensation(rep.relative_amplitudes[0], grid);

    // Trailing-window convergence: value stays within a 0.1% relative band
    // over 0.1 s. Times are relative to the start of the series.
    const auto win = static_cast<std::size_t>(std::llround(0.1 * fs));
    rep.convergence_time_s.fill(-1.0);
    if (history.size() > win) {
        for (std::size_t b = 0; b < kGridSize; ++b) {
            for (std::size_t k = win; k < history.size(); ++k) {
                double lo = history[k][b], hi = history[k][b];
                for (std::size_t j = k - win; j <= k; ++j) {
                    lo = std::min(lo, history[j][b]);
                    hi = std::max(hi, history[j][b]);
                }
                const double ref = std::abs(history[k][b]);
                if (ref > 0.0 && (hi - lo) < 1e-3 * ref) {
                    rep.convergence_time_s[b] =
                        (static_cast<double>(k + static_cast<std::size_t>(engage_step))) / fs;
                    break;
                }
            }
        }
    }

    rep.estimation_seconds_total = std::chrono::duration<double>(clock::now() - t_begin).count();
    rep.estimation_seconds_final_2s = std::chrono::duration<double>(final2s_elapsed).count();
    rep.samples_processed = static_cast<std::int64_t>(n);
    return rep;
}

namespace {

mc_result run_one_mc(const monte_carlo_spec& spec, const pipeline_config& config,
                     const std::optional<envelope_response>& response, int run_id) {
    mc_result res;
    res.run_id = run_id;
    try {
        xoshiro256pp rng(substream_seed(spec.seed, static_cast<std::uint64_t>(run_id)));
        waveform_spec w = spec.base_spec;
        for (auto& h : w.harmonics)
            h.amplitude_pu = rng.uniform(spec.harmonic_range[0], spec.harmonic_range[1]);
        for (auto& h : w.harmonics) h.phase_rad = deg_to_rad(rng.uniform(0.0, 90.0));
        for (auto& f : w.flickers)
            f.relative_amplitude = rng.uniform(spec.flicker_range[0], spec.flicker_range[1]);
        for (auto& f : w.flickers) f.phase_rad = deg_to_rad(rng.uniform(0.0, 90.0));
        w.noise.seed = rng.next();

        const sample_series z = synthesize(w);
        const flicker_report rep = run_hefs(z, config, response);

        const flicker_grid& grid = config.grid;
        std::array<double, kGridSize> true_amps{};
        for (const auto& f : w.flickers) {
            const std::size_t i = grid.index_of(f.frequency_hz);
            if (i != flicker_grid::npos) true_amps[i] += f.relative_amplitude;
        }
        const double s_true = sensation(true_amps, grid).total;
        const double s_est = rep.sensation_index.total;
        if (s_true < 0.01) {
            res.s_error_pct = std::abs(s_est - s_true);
            res.s_error_is_absolute = true;
        } else {
            res.s_error_pct = 100.0 * std::abs(s_est - s_true) / s_true;
        }

        const std::vector<double> tenv = true_envelope(w, 1);
        const std::size_t skip = static_cast<std::size_t>(config.hinf.effective_warmup());
        double num = 0.0, den = 0.0;
        // Trace stride must be 1 for this metric; enforced by caller config.
        for (std::size_t k = skip; k < rep.trace_envelopes.size(); ++k) {
            num += std::abs(rep.trace_envelopes[k][0] - tenv[k]);
            den += tenv[k];
        }
        if (den <= 0.0) throw numeric_error("degenerate true envelope in MC run");
        res.envelope_error_pct = 100.0 * num / den;
    } catch (const std::exception& ex) {
        res.failed = true;
        res.message = ex.what();
        res.s_error_pct = std::numeric_limits<double>::quiet_NaN();
        res.envelope_error_pct = std::numeric_limits<double>::quiet_NaN();
    }
    return res;
}

}  // namespace

std::vector<mc_result> monte_carlo(const monte_carlo_spec& spec, const pipeline_config& config,
                                   int workers) {
    if (spec.runs < 1) throw config_error("monte carlo needs runs >= 1");
    if (spec.harmonic_range[0] > spec.harmonic_range[1] || spec.flicker_range[0] > spec.flicker_range[1])
        throw config_error("monte carlo ranges must be ordered");
    validate(spec.base_spec);

    pipeline_config run_config = config;
    run_config.report_stride = 1;  // envelope error metric consumes every frame

    // One calibration for the whole campaign (response depends on config only).
    std::optional<envelope_response> response;
    if (run_config.compensate_envelope_response)
        response = calibrate_envelope_response(run_config.hinf, run_config.frequency.fixed_hz,
                                               spec.base_spec.sampling.rate_hz, run_config.grid);

    std::vector<mc_result> results(static_cast<std::size_t>(spec.runs));
    if (workers < 1) workers = 1;
    workers = std::min<int>(workers, spec.runs);
    if (workers == 1) {
        for (int i = 0; i < spec.runs; ++i) results[static_cast<std::size_t>(i)] =
            run_one_mc(spec, run_config, response, i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int t = 0; t < workers; ++t) {
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < spec.runs; i = next.fetch_add(1))
                    results[static_cast<std::size_t>(i)] = run_one_mc(spec, run_config, response, i);
            });
        }
        for (auto& th : pool) th.join();
    }
    return results;
}

comparison_report compare(const sample_series& series, const pipeline_config& config,
                          const baseline_config& baseline,
                          const std::optional<waveform_spec>& truth) {
    comparison_report out;
    out.hefs = run_hefs(series, config);
    out.hefs_seconds_final_2s = out.hefs.estimation_seconds_final_2s;

    const auto fft_begin = std::chrono::steady_clock::now();
    out.fft = fft_estimate(series, out.hefs.frequency_hz, config.grid, baseline);
    out.fft_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - fft_begin).count();

    if (truth) {
        out.has_truth = true;
        const double fs = series.rate_hz;
        const auto window_n = static_cast<std::size_t>(std::llround(2.0 * fs));
        if (series.samples.size() < window_n) throw data_error("series shorter than the 2 s comparison window");
        const std::size_t n0 = series.samples.size() - window_n;
        const std::vector<double> tenv_full = true_envelope(*truth, 1);

        std::vector<double> tenv(tenv_full.begin() + static_cast<std::ptrdiff_t>(n0), tenv_full.end());
        std::vector<double> hefs_rec(window_n), fft_rec(window_n);
        const flicker_grid& grid = config.grid;
        for (std::size_t k = 0; k < window_n; ++k) {
            const double t = series.time_at(n0 + k);
            double mod_h = 1.0, mod_f = 1.0;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double ang = kTwoPi * grid[i] * t;
                mod_h += 0.5 * out.hefs.relative_amplitudes[0][i] *
                         std::cos(ang + out.hefs.flicker_phases_rad[0][i]);
                mod_f += 0.5 * out.fft.relative_amplitudes[i] * std::cos(ang + out.fft.phases_rad[i]);
            }
            hefs_rec[k] = out.hefs.adaline_dc[0] * mod_h;
            fft_rec[k] = out.fft.v1 * mod_f;
        }
        out.hefs_envelope_stats = compute_error_stats(hefs_rec, tenv);
        out.fft_envelope_stats = compute_error_stats(fft_rec, tenv);
    }
    return out;
}

}  // namespace hefs
