#include "pcredit/action_id.hpp"

#include <cctype>
#include <stdexcept>

namespace pcredit {
namespace {

struct NaturalKey {
  bool structured = false;
  std::string_view letters;
  std::string_view digits;  // leading zeros stripped
};

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

NaturalKey key_of(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && is_alpha(s[i])) ++i;
  if (i == 0 || i == s.size()) return {};
  for (std::size_t j = i; j < s.size(); ++j) {
    if (!is_digit(s[j])) return {};
  }
  std::string_view digits = s.substr(i);
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return {true, s.substr(0, i), digits};
}

}  // namespace

std::strong_ordering natural_compare(std::string_view a, std::string_view b) {
  const NaturalKey ka = key_of(a);
  const NaturalKey kb = key_of(b);
  if (ka.structured != kb.structured) {
    return ka.structured ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (ka.structured) {
    if (auto c = ka.letters.size() <=> kb.letters.size(); c != 0) return c;
    if (auto c = ka.letters.compare(kb.letters) <=> 0; c != 0) return c;
    // Same letter run: compare the numbers by magnitude, then textually so
    // "A01" and "A1" remain distinct.
    if (auto c = ka.digits.size() <=> kb.digits.size(); c != 0) return c;
    if (auto c = ka.digits.compare(kb.digits) <=> 0; c != 0) return c;
  }
  return a.compare(b) <=> 0;
}

ActionId::ActionId(std::string name) : name_(std::move(name)) {
  if (name_.empty()) throw std::invalid_argument("action id must be non-empty");
}

}  // namespace pcredit
