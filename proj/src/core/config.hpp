#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "backtest.hpp"
#include "sensitivity.hpp"

namespace ctp::config {

/// Flat key-value run configuration ("key = value" lines, '#' comments).
/// Every key has a default; unknown keys are rejected so typos fail loudly.
class Config {
public:
    Config();

    void load_file(const std::string& path);
    void set(const std::string& key, const std::string& value);
    const std::string& get(const std::string& key) const;

    double get_double(const std::string& key) const;
    int get_int(const std::string& key) const;
    std::uint64_t get_uint64(const std::string& key) const;
    bool get_bool(const std::string& key) const;

    /// Builds the engine configuration; start_date/end_date must be set.
    backtest::BacktestConfig to_backtest() const;

    sensitivity::PerturbationSpec to_perturbation() const;

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

}  // namespace ctp::config
