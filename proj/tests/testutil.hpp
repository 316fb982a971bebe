#pragma once

// Helpers for tests that drive the command-line binary or poke at files.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace testutil {

struct CliResult {
  int exit_code = -1;
  std::string out;
};

// Runs the built CLI with the given argument string, capturing stdout.
// stderr is left alone so failures stay visible in the test log.
inline CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(KANLAB_CLI_PATH) + " " + args;
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  return r;
}

inline std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Value of a "key=value" line in a report, or "" when absent.
inline std::string summary_value(const std::string& text,
                                 const std::string& key) {
  const std::string needle = key + "=";
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line))
    if (line.rfind(needle, 0) == 0) return line.substr(needle.size());
  return "";
}

inline std::string temp_path(const std::string& name) {
  return std::string("/tmp/kanlab_test_") + name;
}

}  // namespace testutil
