#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace entest::cli {

using Json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

/// Exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_validation = 2;
inline constexpr int exit_check_failed = 3;

/// Tabular command result. Cells are JSON scalars.
struct Table {
  std::string command;
  Json metadata = Json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
};

std::string to_csv(const Table& table);
std::string to_json(const Table& table);

/// "1,2,5" and "40:80:10" (inclusive, default step 1); mixable.
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

/// Round to 6 decimals for printing gains.
double round6(double value);

/// Resolves `path` against ENTEST_OUTPUT_DIR when it is relative.
std::string resolve_output_path(const std::string& path);

/// Runs the command line; argv[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace entest::cli
