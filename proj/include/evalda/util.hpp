#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace evalda {

// Runs fn(i) for i in [0, n) across up to `threads` workers (0 = hardware
// concurrency). Results must be written to preallocated slots keyed by i;
// nothing about completion order is observable.
void parallel_for(std::int64_t n, std::int32_t threads,
                  const std::function<void(std::int64_t)>& fn);

// Shortest decimal digits that round-trip a double exactly, '.' decimal
// separator regardless of locale.
std::string format_double(double value);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

std::vector<std::string> split(const std::string& s, char sep);
std::string trim(const std::string& s);

}  // namespace evalda
