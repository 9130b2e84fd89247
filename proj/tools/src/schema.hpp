#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace lorentz::cli {

using Json = nlohmann::json;

// Usage errors: bad flags, malformed config files and schema violations.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FieldType {
  number,
  positive,      // number > 0
  nonnegative,   // number >= 0
  integer,       // integer >= 1
  boolean,
  string,
  numbers,       // array of numbers
  event,         // array of numbers, length = space dimension when known
  events,        // array of events
  space,         // space descriptor object
  geodesic,      // {"p": event, "v": event, "t_max": positive}
  path,          // existing input file
};

struct Field {
  std::string key;
  FieldType type = FieldType::number;
  bool required = false;
  Json fallback;  // default when absent; null means no default
  std::vector<std::string> choices{};
  bool positional = false;
  std::string help{};
};

// Fills defaults and checks every field; throws UsageError naming the JSON
// pointer of the first violation. `dim` of a space descriptor, when present,
// is used to check event lengths.
Json validate(const Json& config, const std::vector<Field>& fields);

// Parses flag text into the JSON value of the field type; `where` is the
// pointer used in error messages.
Json parse_flag(const std::string& text, FieldType type, const std::string& where);

// Space descriptor defaults and checks; `where` prefixes error paths.
Json validate_space(const Json& space, const std::string& where);

}  // namespace lorentz::cli
