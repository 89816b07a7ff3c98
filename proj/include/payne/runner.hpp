#pragma once

#include <iosfwd>
#include <string>

#include "payne/config.hpp"
#include "payne/mesh.hpp"

namespace payne {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Subcommands: spectrum, identity-scan, beta1-scan, counterexample, spherecap, report.
/// Summary lines (`key=value`) go to `out`, diagnostics to `err`. Every run writes a
/// directory under the run root (--run-root, else $PAYNE_RUN_ROOT, else ./runs).
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Mesh from the domain parameters (domain, radius, refine, width, height, nx, ny, sides,
/// mesh-file).
Mesh mesh_from_parameters(const ParameterSet& p);

std::string library_version();

}  // namespace payne
