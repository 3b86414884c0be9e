#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace relanosov {

// Signed generator index: +i is generator i (1-based), -i its inverse.
using Letter = int;

// A word in the generators of a marked group. Inverses are implicit through
// negative letters; the empty word is the identity.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Letter> letters) : letters_(letters) {}
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}

  const std::vector<Letter>& letters() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter back() const { return letters_.back(); }

  auto begin() const noexcept { return letters_.begin(); }
  auto end() const noexcept { return letters_.end(); }

  void push_back(Letter x) { letters_.push_back(x); }
  void pop_back() { letters_.pop_back(); }

  // Lexicographic on signed indices; this is the ordering used for every
  // enumeration and report.
  auto operator<=>(const Word&) const = default;
  bool operator==(const Word&) const = default;

  // Largest generator index referenced, 0 for the identity.
  int max_generator() const noexcept;

 private:
  std::vector<Letter> letters_;
};

Word concat(const Word& u, const Word& v);
Word inverse(const Word& w);

// Free reduction: cancels adjacent pairs (x, -x) until none remain.
Word reduce_word(const Word& w);
bool is_freely_reduced(const Word& w) noexcept;

// Freely reduced w^n; negative n gives powers of the inverse.
Word power(const Word& w, long long n);

// Generators print as a, b, c, ...; inverses as A, B, C, ...; the identity
// as "e". Ranks above 26 fall back to "x12" / "X12".
std::string to_string(const Word& w);
Word parse_word(std::string_view text);

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept;
};

}  // namespace relanosov
