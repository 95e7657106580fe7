// Command-line entry point: job ingestion, dispatch to the owning module,
// result persistence (atomic write-then-rename), and CSV report emission.
#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace varembed::cli {

// Exit codes: 0 success/holds, 2 condition_fails or violations found,
// 3 inconclusive, 64 usage error, 65 data error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFails = 2;
inline constexpr int kExitInconclusive = 3;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitData = 65;

int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

// Tidy CSV from compatible run records (one row per record/trace point).
// `kind_hint` selects the header for empty input; records of mixed commands
// throw MixedSchemas.
std::string make_report_csv(const std::vector<nlohmann::json>& records,
                            const std::string& kind_hint);

}  // namespace varembed::cli
