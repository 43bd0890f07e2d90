#pragma once

#include <compare>
#include <functional>
#include <string>
#include <string_view>

namespace pcredit {

/// Natural ordering used everywhere an identifier order must be canonical.
///
/// Identifiers of the form `<letters><digits>` ("A1", "F2", "AA10", "DP14",
/// "p7") sort before everything else, keyed by (letter-run length, letters,
/// numeric suffix). For board squares this is column-major (col, row) order.
/// All other identifiers follow in plain lexicographic order. Two identifiers
/// compare equal only when their strings are identical.
std::strong_ordering natural_compare(std::string_view a, std::string_view b);

inline bool natural_less(std::string_view a, std::string_view b) {
  return natural_compare(a, b) == std::strong_ordering::less;
}

struct NaturalLess {
  bool operator()(std::string_view a, std::string_view b) const { return natural_less(a, b); }
};

/// Opaque action identifier: a board square ("F2"), a Four Towers quadrant
/// ("NE"), or any other non-empty label unique within one decision.
class ActionId {
 public:
  ActionId() = default;
  explicit ActionId(std::string name);

  const std::string& str() const noexcept { return name_; }

  friend bool operator==(const ActionId&, const ActionId&) = default;
  friend std::strong_ordering operator<=>(const ActionId& a, const ActionId& b) {
    return natural_compare(a.name_, b.name_);
  }

 private:
  std::string name_;
};

}  // namespace pcredit

template <>
struct std::hash<pcredit::ActionId> {
  std::size_t operator()(const pcredit::ActionId& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
