#pragma once

// JSON instance documents. Rationals are exact strings ("3", "1/3"); plain
// JSON integers are also accepted on input. Vertiports, operators and fleets
// are sorted by id on parse, so violation paths index the sorted order.
//
// {
//   "schema_version": "1",
//   "instance": {
//     "horizon": 3, "lambda": "1/2",
//     "vertiports": [{"id": "v1", "arrival_cap": [...], "departure_cap": [...],
//                     "parking_cap": [...], "congestion_cost": [["0", "1"], ...]}],
//     "operators": [{"id": "op1", "weight": "1", "fleet": [{"id": "a1", "origin": "v1",
//       "menu": [{"key": 0, "kind": "stay"},
//                {"key": 1, "kind": "transit", "depart": 1, "destination": "v2", "arrive": 2}]}]}]
//   },
//   "bids": {"op1": {"a1": ["0", "10"]}},
//   "valuations": {...}
// }

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "vertiport/model.hpp"

namespace vertiport {

inline constexpr const char* kSchemaVersion = "1";

struct InstanceDocument {
  std::string schema_version = kSchemaVersion;
  Instance instance;
  std::optional<BidProfile> bids;
  std::optional<ValuationProfile> valuations;
};

// Syntax, schema and invariant failures. `path()` locates the field.
class DocumentError : public std::runtime_error {
 public:
  DocumentError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws DocumentError. With `validate`, instance and profile invariants are
// checked too.
InstanceDocument parse_document(std::string_view text, bool validate = true);
std::string render_document(const InstanceDocument& doc);

InstanceDocument load_document(const std::filesystem::path& path, bool validate = true);
void save_document(const std::filesystem::path& path, const InstanceDocument& doc);

// Bids if present, else truthful copies of the valuations. Throws
// DocumentError when neither is present.
BidProfile effective_bids(const InstanceDocument& doc);

}  // namespace vertiport
