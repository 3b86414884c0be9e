#include "relanosov/word.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "relanosov/error.hpp"

namespace relanosov {

int Word::max_generator() const noexcept {
  int m = 0;
  for (Letter x : letters_) m = std::max(m, std::abs(x));
  return m;
}

Word concat(const Word& u, const Word& v) {
  std::vector<Letter> out;
  out.reserve(u.size() + v.size());
  out.insert(out.end(), u.begin(), u.end());
  out.insert(out.end(), v.begin(), v.end());
  return Word(std::move(out));
}

Word inverse(const Word& w) {
  std::vector<Letter> out(w.size());
  std::transform(w.letters().rbegin(), w.letters().rend(), out.begin(),
                 [](Letter x) { return -x; });
  return Word(std::move(out));
}

Word reduce_word(const Word& w) {
  std::vector<Letter> stack;
  stack.reserve(w.size());
  for (Letter x : w) {
    if (!stack.empty() && stack.back() == -x) {
      stack.pop_back();
    } else {
      stack.push_back(x);
    }
  }
  return Word(std::move(stack));
}

bool is_freely_reduced(const Word& w) noexcept {
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] == -w[i - 1]) return false;
  }
  return true;
}

Word power(const Word& w, long long n) {
  if (n < 0) return power(inverse(w), -n);
  std::vector<Letter> out;
  out.reserve(w.size() * static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) out.insert(out.end(), w.begin(), w.end());
  return reduce_word(Word(std::move(out)));
}

std::string to_string(const Word& w) {
  if (w.empty()) return "e";
  std::string out;
  for (Letter x : w) {
    const int g = std::abs(x);
    if (g <= 26) {
      out.push_back(static_cast<char>((x > 0 ? 'a' : 'A') + g - 1));
    } else {
      out += (x > 0 ? "x" : "X") + std::to_string(g);
      out.push_back('.');
    }
  }
  return out;
}

Word parse_word(std::string_view text) {
  std::vector<Letter> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char ch = text[i];
    if (ch == 'e' && text.size() == 1) return Word{};
    if ((ch == 'x' || ch == 'X') && i + 1 < text.size() &&
        std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
      std::size_t j = i + 1;
      int g = 0;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
        g = g * 10 + (text[j] - '0');
        ++j;
      }
      if (j < text.size() && text[j] == '.') ++j;
      out.push_back(ch == 'x' ? g : -g);
      i = j;
    } else if (ch >= 'a' && ch <= 'z') {
      out.push_back(ch - 'a' + 1);
      ++i;
    } else if (ch >= 'A' && ch <= 'Z') {
      out.push_back(-(ch - 'A' + 1));
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
    } else {
      throw Error(ErrorCode::InvalidInput, "bad character in word '" + std::string(text) + "'");
    }
  }
  return Word(std::move(out));
}

std::size_t WordHash::operator()(const Word& w) const noexcept {
  // FNV-1a over the letters.
  std::size_t h = 1469598103934665603ull;
  for (Letter x : w) {
    h ^= static_cast<std::size_t>(static_cast<unsigned>(x));
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace relanosov
