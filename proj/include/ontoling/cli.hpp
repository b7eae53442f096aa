#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ontoling::cli {

/// Exit codes: 0 ok, 1 domain failure, 2 usage or I/O error.
inline constexpr int kOk = 0;
inline constexpr int kDomainFailure = 1;
inline constexpr int kUsage = 2;

/// Entry point for the `ontoling` tool. args excludes the program name.
/// Subcommands: validate-lexicon, gen, grade, serve.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ontoling::cli
