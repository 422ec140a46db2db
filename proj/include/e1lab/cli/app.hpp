#pragma once

#include <map>
#include <string>

namespace e1lab::cli {

// key=value lines; '#' starts a comment. Throws InvalidArgument on a
// malformed line or an unreadable file.
std::map<std::string, std::string> read_config(const std::string& path);

// Parses the command line, runs the command and returns the exit code.
int run(int argc, char** argv);

}  // namespace e1lab::cli
