#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctp::util {

/// Error raised for malformed input data (files, CSV rows, ranges).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Error raised when a numerical procedure cannot produce a usable result.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& line, char sep);

/// Shortest decimal text that round-trips the double exactly.
std::string format_double(double v);

/// Locale-independent double parse; throws DataError on garbage.
double parse_double(const std::string& s);

/// splitmix64 finalizer; used to derive independent RNG substreams.
std::uint64_t mix64(std::uint64_t x);

/// Deterministic substream seed: same (seed, stream) always maps to the
/// same value, distinct streams decorrelate.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t stream) {
    return mix64(seed + 0x9E3779B97F4A7C15ULL * (stream + 1));
}

}  // namespace ctp::util
