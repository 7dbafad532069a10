#pragma once

// JSON and text forms of reports, levels, bounds and congruence witnesses.
// JSON objects keep a fixed key order; integers beyond 2^53 are written as
// decimal strings.

#include <map>
#include <string>

#include "galdef/json_types.hpp"
#include "galdef/obstruct.hpp"

namespace galdef::io {

OrderedJson to_json(const ob::Witness& w);
OrderedJson to_json(const ob::ConditionHit& hit);
OrderedJson to_json(const ob::ObstructionReport& report);
OrderedJson to_json(const mf::CongruenceWitness& w);
OrderedJson to_json(const ob::Supplementary& s);
OrderedJson to_json(const ob::AdmissibleLevel& level);

/// Inverse of to_json. Throws Schema on malformed input.
ob::Witness witness_from_json(const OrderedJson& j);
ob::ConditionHit hit_from_json(const OrderedJson& j);
ob::ObstructionReport report_from_json(const OrderedJson& j);
mf::CongruenceWitness congruence_from_json(const OrderedJson& j);

/// One line per hit: the concrete congruence or divisibility.
std::string describe(const ob::ConditionHit& hit);
std::string render_text(const ob::ObstructionReport& report);

std::string format_residue(const std::vector<ff::u64>& coeffs);

}  // namespace galdef::io
