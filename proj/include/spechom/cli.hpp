#pragma once

namespace spechom {

/// Command-line entry point. Subcommands: beats | fisher-scan | simulate |
/// estimate | validate-crb | oracle-check. Returns 0 on success, 1 on
/// validation/configuration errors, 2 on numerical (quadrature) failures.
int run_cli(int argc, const char* const* argv);

}  // namespace spechom
