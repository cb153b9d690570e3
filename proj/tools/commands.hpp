#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace kfg::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;

/// Inclusive integer range written "A..B" or "A".
struct Range
{
    int lo{0};
    int hi{0};
};

/// Throws std::invalid_argument on malformed input or lo > hi.
Range parse_range(std::string_view text);

/// Locale-independent "%.16e".
std::string format_double(double x);

/// Number of worker threads: KFG_THREADS if set and positive, else hardware concurrency, capped by `jobs`.
unsigned worker_count(std::size_t jobs);

/// Entry point shared by the executable and the tests. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace kfg::cli
