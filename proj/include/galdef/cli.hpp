#pragma once

// Command dispatch for the galdef executable, plus the JSON-producing
// drivers it shares with the Python module.

#include <iosfwd>
#include <set>

#include "galdef/json_types.hpp"
#include "galdef/obstruct.hpp"

namespace galdef::cli {

using ff::u64;
using mf::NewformPtr;

enum ExitCode : int { kComputed = 0, kInternal = 1, kInputError = 2, kHypothesis = 3 };

/// Exit code for an error kind: HypothesisViolated -> 3, everything else -> 2.
int exit_code_for(ErrorKind kind);

/// Without a gallery file the form alone is used, complete for the level it
/// declares.
mf::Gallery self_gallery(const NewformPtr& f);

OrderedJson check_json(const mf::NewformPtr& f, const mf::Gallery& gallery, u64 ell, const std::set<u64>& extra,
                       const ob::CheckOptions& opts);
OrderedJson scan_json(const mf::NewformPtr& f, const mf::Gallery& gallery, u64 ell_max, const std::set<u64>& extra,
                      const ob::CheckOptions& opts);
OrderedJson levels_json(const mf::Newform& f, u64 ell, u64 p_max, unsigned alpha_budget);
OrderedJson congruences_json(const mf::Newform& f, const mf::Gallery& gallery, u64 ell_max, u64 seed);
OrderedJson h2bound_json(const mf::Newform& f, u64 ell, u64 level_prime);

/// Full command line, argv[0] included. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace galdef::cli
