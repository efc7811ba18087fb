#include <iostream>

#include "CLI11.hpp"

#include "spectradiag/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Exact feasibility, minimal elements, and matrix witnesses for diagonals with a prescribed spectrum"};
  app.require_subcommand(1);

  spectradiag::CommandRequest request;

  const auto with_common = [&request](CLI::App* cmd) {
    cmd->add_option("--sequence", request.sequence_path, "Sequence JSON file")->required();
    cmd->add_option("--output", request.output,
                    "Output format; defaults to the command's native one (json or csv)");
    return cmd;
  };

  CLI::App* check = with_common(
      app.add_subcommand("check", "Decide whether the sequence is a diagonal for the spectrum"));
  check->add_option("--spectrum", request.spectrum_path, "Spectrum JSON file")->required();

  CLI::App* minimal = with_common(
      app.add_subcommand("minimal", "Minimal elements of the rank-N eigenvalue region"));
  minimal->add_option("--N", request.N, "Number of prescribed eigenvalues")->required();
  minimal->add_option("--epsilon", request.epsilon,
                      "Truncation cutoff override, rational in (0, 1/2]");

  CLI::App* membership = with_common(app.add_subcommand(
      "membership", "Test an eigenvalue vector against the rank-N eigenvalue region"));
  membership->add_option("--lambda", request.lambda_text,
                         "Inline JSON array of rationals, e.g. '[\"2/3\",\"1/3\"]'")
      ->required();

  CLI::App* witness = with_common(app.add_subcommand(
      "witness", "Symmetric matrix with the given finite diagonal and spectrum"));
  witness->add_option("--spectrum", request.spectrum_path, "Spectrum JSON file")->required();

  CLI::App* fplot = with_common(
      app.add_subcommand("fplot", "Tabulate the comparison function on a uniform grid"));
  fplot->add_option("--grid", request.grid, "Number of interior grid points")->required();

  CLI::App* transform = with_common(
      app.add_subcommand("transform", "Collapse near-endpoint entries onto the endpoints"));
  transform->add_option("--epsilon", request.epsilon, "Collapse radius, rational in (0, 1/2]")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  request.command = app.get_subcommands().front()->get_name();
  return spectradiag::run(request, std::cout, std::cerr);
}
