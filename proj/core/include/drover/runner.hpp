#pragma once

#include <string>
#include <vector>

#include "drover/config.hpp"

namespace drover {

struct RunOutcome {
    int exit_code = 0;
    std::string summary_text;            // summary JSON, or error JSON on failure
    std::vector<std::string> artifacts;  // file names written, relative to out_dir
};

// Executes one subcommand against a parsed config: creates out_dir, writes
// the command's artifacts plus summary.json, and returns the summary text.
// override_notes are echoed verbatim into the summary for provenance.
// Failures are caught and reported as error JSON with the matching exit
// code; nothing is thrown.
RunOutcome run_command(const RunConfig& cfg, const std::string& command,
                       const std::string& out_dir,
                       const std::vector<std::string>& override_notes = {});

}  // namespace drover
