#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace spectradiag {

// One batch invocation. Fields are only read by the commands that use them:
//   check      sequence_path, spectrum_path
//   minimal    sequence_path, N, epsilon (optional cutoff override)
//   membership sequence_path, lambda_text
//   witness    sequence_path, spectrum_path
//   fplot      sequence_path, grid
//   transform  sequence_path, epsilon
// `output` may stay empty (use the command's native format: csv for witness
// and fplot, json for the rest) or name that native format explicitly;
// asking for the other format is an error.
struct CommandRequest {
  std::string command;
  std::string sequence_path;
  std::string spectrum_path;
  std::uint64_t N = 0;
  std::string lambda_text;  // inline JSON array of rational strings
  std::uint64_t grid = 0;
  std::string output;
  std::string epsilon;  // rational in (0, 1/2]
};

// Executes one request, writing the result document to `out` and diagnostics
// to `err`. Returns the process exit status: 0 for a successful positive
// answer, 2 when the computed answer is negative (infeasible spectrum,
// non-member lambda) which is still a successful run, and 1 on any error
// (bad request, unreadable file, malformed JSON, violated precondition).
// Setting the environment variable SPECTRADIAG_LOG to a nonempty value
// turns on progress diagnostics on `err`.
int run(const CommandRequest& request, std::ostream& out, std::ostream& err);

}  // namespace spectradiag
