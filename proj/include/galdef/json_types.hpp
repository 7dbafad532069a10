#pragma once

#include "json.hpp"

namespace galdef {

using Json = nlohmann::json;
/// Insertion-ordered; used for every document the library writes so that
/// output is byte-stable.
using OrderedJson = nlohmann::ordered_json;

}  // namespace galdef
