#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hdx::cli {

// Exit codes of the hdx command.
enum ExitCode : int {
    kOk = 0,
    kCheckFailed = 1,   // a verification or bound check came out negative
    kBadArguments = 2,  // unknown options, malformed files, parameters outside the domain
    kResourceCap = 3,   // an enumeration hit a cap; raise it through HDX_CAPS or --caps
    kNoCone = 4,        // the complex has nonvanishing reduced homology in the requested range
    kInternal = 70,
};

// Runs one command line (without the program name). JSON and human output go to `out`,
// diagnostics to `err`. `caps_env` plays the role of the HDX_CAPS variable.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const std::string& caps_env = "");

}  // namespace hdx::cli
