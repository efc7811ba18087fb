#include "spectradiag/cli.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "spectradiag/errors.hpp"
#include "spectradiag/feasibility.hpp"
#include "spectradiag/json_io.hpp"
#include "spectradiag/lambda_sets.hpp"
#include "spectradiag/majorization.hpp"
#include "spectradiag/scalar.hpp"
#include "spectradiag/sequences.hpp"
#include "spectradiag/spectrum.hpp"
#include "spectradiag/transforms.hpp"

namespace spectradiag {
namespace {

using ojson = nlohmann::ordered_json;

constexpr int exit_ok = 0;
constexpr int exit_error = 1;
constexpr int exit_negative = 2;

bool logging_enabled() {
  const char* flag = std::getenv("SPECTRADIAG_LOG");
  return flag != nullptr && *flag != '\0';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::parse_error, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) fail(errc::parse_error, "cannot read " + path);
  return std::move(buffer).str();
}

// Each command has exactly one document format; an explicit --output must
// name it.
void require_native_format(const CommandRequest& request, const char* native) {
  if (!request.output.empty() && request.output != native)
    fail(errc::precondition_violated,
         request.command + " emits " + native + " only, not " + request.output);
}

DiagonalSequence load_sequence(const CommandRequest& request) {
  if (request.sequence_path.empty()) fail(errc::precondition_violated, "--sequence is required");
  return sequence_from_json(read_file(request.sequence_path));
}

SpectrumSpec load_spectrum(const CommandRequest& request) {
  if (request.spectrum_path.empty()) fail(errc::precondition_violated, "--spectrum is required");
  return spectrum_from_json(read_file(request.spectrum_path));
}

int run_check(const CommandRequest& request, std::ostream& out) {
  require_native_format(request, "json");
  const DiagonalSequence seq = load_sequence(request);
  const SpectrumSpec spec = load_spectrum(request);
  const FeasibilityVerdict verdict = decide_diagonal(seq, spec);
  out << to_json(verdict);
  return verdict.feasible ? exit_ok : exit_negative;
}

int run_minimal(const CommandRequest& request, std::ostream& out) {
  require_native_format(request, "json");
  const DiagonalSequence seq = load_sequence(request);
  const MinimalElementReport report =
      request.epsilon.empty() ? minimal_set(seq, request.N)
                              : minimal_set(seq, request.N, Scalar::parse(request.epsilon));
  out << to_json(report);
  return exit_ok;
}

// Names the first condition of the membership characterization that fails:
// integrality of C(1/2) - D(1/2) - sum(lambda) first, then domination of the
// comparison function of lambda at each lambda value, scanned downward.
std::string first_violation(const DiagonalSequence& seq, const std::vector<Scalar>& lambda) {
  const CutStatistics stats = cut_stats(seq, Scalar(1, 2), Scalar(1));
  Scalar total(0);
  for (const Scalar& x : lambda) total += x;
  const Scalar residue = frac_mod_one(stats.C.value() - stats.D.value() - total);
  if (!residue.is_zero()) return "trace:residue=" + residue.str();
  const DiagonalSequence finite_lambda = DiagonalSequence::finite(Scalar(0), Scalar(1), lambda);
  for (const Scalar& alpha : decreasing_rearrangement(lambda))
    if (f_value(seq, alpha) < f_value(finite_lambda, alpha)) return "f:alpha=" + alpha.str();
  return "unknown";
}

int run_membership(const CommandRequest& request, std::ostream& out) {
  require_native_format(request, "json");
  const DiagonalSequence seq = load_sequence(request);
  if (request.lambda_text.empty()) fail(errc::precondition_violated, "--lambda is required");
  const std::vector<Scalar> lambda = lambda_from_json(request.lambda_text);
  const bool member = lambda_membership(seq, lambda);
  ojson doc = ojson::object();
  doc["member"] = member;
  if (!member) doc["failed_condition"] = first_violation(seq, lambda);
  out << doc.dump(2) << "\n";
  return member ? exit_ok : exit_negative;
}

int run_witness(const CommandRequest& request, std::ostream& out, std::ostream& err) {
  require_native_format(request, "csv");
  const DiagonalSequence seq = load_sequence(request);
  const SpectrumSpec spec = load_spectrum(request);
  const std::vector<Scalar> diagonal = seq.materialize_nonincreasing();
  std::vector<Scalar> lambda;
  for (const auto& [eigenvalue, multiplicity] : spec.pairs()) {
    if (multiplicity.is_infinite())
      fail(errc::precondition_violated, "witness needs every multiplicity finite");
    for (std::uint64_t i = 0; i < multiplicity.finite_value(); ++i) lambda.push_back(eigenvalue);
  }
  try {
    const SymmetricMatrixWitness witness = construct_matrix(lambda, diagonal);
    const double gap = validate_eigenvalues(witness, lambda);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", gap);
    out << witness.to_csv() << "max_eigenvalue_error," << buf << "\n";
    return exit_ok;
  } catch (const error& e) {
    if (e.code() != errc::infeasible_input) throw;
    err << "witness: " << e.what() << "\n";
    return exit_negative;
  }
}

int run_fplot(const CommandRequest& request, std::ostream& out) {
  require_native_format(request, "csv");
  const DiagonalSequence seq = load_sequence(request);
  if (request.grid == 0) fail(errc::precondition_violated, "--grid must be at least 1");
  if (request.grid > 1000000) fail(errc::precondition_violated, "--grid is limited to 1000000");
  const Scalar denominator(static_cast<std::int64_t>(request.grid) + 1);
  out << "alpha,f\n";
  for (std::uint64_t j = 1; j <= request.grid; ++j) {
    const Scalar alpha = Scalar(static_cast<std::int64_t>(j)) / denominator;
    out << alpha.str() << ',' << f_value(seq, alpha).str() << '\n';
  }
  return exit_ok;
}

int run_transform(const CommandRequest& request, std::ostream& out) {
  require_native_format(request, "json");
  const DiagonalSequence seq = load_sequence(request);
  if (request.epsilon.empty()) fail(errc::precondition_violated, "--epsilon is required");
  const TransformResult result = truncate_to_finite(seq, Scalar::parse(request.epsilon));
  out << to_json(result);
  return exit_ok;
}

}  // namespace

int run(const CommandRequest& request, std::ostream& out, std::ostream& err) {
  const bool verbose = logging_enabled();
  if (verbose)
    err << "[spectradiag] command=" << request.command << " sequence=" << request.sequence_path
        << " spectrum=" << request.spectrum_path << " N=" << request.N
        << " lambda=" << request.lambda_text << " grid=" << request.grid
        << " epsilon=" << request.epsilon << "\n";
  int status = exit_error;
  try {
    if (request.command == "check")
      status = run_check(request, out);
    else if (request.command == "minimal")
      status = run_minimal(request, out);
    else if (request.command == "membership")
      status = run_membership(request, out);
    else if (request.command == "witness")
      status = run_witness(request, out, err);
    else if (request.command == "fplot")
      status = run_fplot(request, out);
    else if (request.command == "transform")
      status = run_transform(request, out);
    else
      fail(errc::precondition_violated, "unknown command \"" + request.command + "\"");
  } catch (const error& e) {
    err << "error: " << e.what() << "\n";
    status = exit_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    status = exit_error;
  }
  if (verbose) err << "[spectradiag] exit=" << status << "\n";
  return status;
}

}  // namespace spectradiag
