#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hefs {

// Error categories map 1:1 onto CLI exit codes.
enum class exit_code : int { ok = 0, config = 2, data = 3, numeric = 4 };

class error : public std::runtime_error {
public:
    error(exit_code code, const std::string& what) : std::runtime_error(what), code_(code) {}
    exit_code code() const noexcept { return code_; }

private:
    exit_code code_;
};

// Invalid waveform/pipeline configuration (bad spec, Nyquist violation, ...).
class config_error : public error {
public:
    explicit config_error(const std::string& what) : error(exit_code::config, what) {}
};

// Malformed or insufficient input data (CSV parse errors, short series, ...).
class data_error : public error {
public:
    explicit data_error(const std::string& what) : error(exit_code::data, what) {}
};

// Numeric failure inside an estimator.
class numeric_error : public error {
public:
    explicit numeric_error(const std::string& what) : error(exit_code::numeric, what) {}
};

// H-inf recursion lost feasibility (singular inner matrix or indefinite
// covariance). Carries the offending step index.
class feasibility_violation : public numeric_error {
public:
    feasibility_violation(std::int64_t step, const std::string& what)
        : numeric_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
    std::int64_t step() const noexcept { return step_; }

private:
    std::int64_t step_;
};

// ADALINE harmonic amplitude collapsed below the usable threshold.
class degenerate_envelope : public numeric_error {
public:
    explicit degenerate_envelope(const std::string& what) : numeric_error(what) {}
};

}  // namespace hefs
