#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "specbench/env.hpp"

namespace specbench::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;
inline constexpr int kExitUnreachable = 4;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kProtocolVersion = 1;

/// Entry point shared by the executable and the tests. Subcommands: corpus,
/// sample, eval, compile, oracle, plot-data, serve, rollout.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

/// First line written by `serve`.
nlohmann::json hello_message(const Env& env);
/// The JSON-lines session behind `serve`: one reply line per request line.
/// Returns when a close request arrives or input ends.
void serve(Env& env, std::istream& in, std::ostream& out);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace specbench::cli
