#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>

namespace sdp {

/// States, message payloads, operation arguments, queries and evaluation
/// results are all JSON values. nlohmann::json keeps object members in a
/// sorted std::map, so dump() of a value built from sorted containers is
/// canonical: equal states serialize to identical bytes.
using Value = nlohmann::json;

/// Canonical serialization: compact separators, sorted keys (inherent to
/// the backing map). Two values compare equal iff their canonical dumps
/// are byte-identical.
inline std::string canonical(const Value& v) { return v.dump(); }

}  // namespace sdp
