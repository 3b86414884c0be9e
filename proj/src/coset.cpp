#include "relanosov/coset.hpp"

#include <cstdlib>

#include "relanosov/error.hpp"

namespace relanosov {

CosetTable::CosetTable(int rank, std::vector<std::vector<int>> action,
                       std::vector<Word> representatives)
    : rank_(rank), action_(std::move(action)), representatives_(std::move(representatives)) {
  const int n = index();
  if (n < 1) throw Error(ErrorCode::InconsistentTable, "coset table has no cosets");
  if (static_cast<int>(action_.size()) != rank_) {
    throw Error(ErrorCode::InconsistentTable, "one permutation per generator required");
  }
  inverse_action_.assign(static_cast<std::size_t>(rank_), std::vector<int>(n, -1));
  for (int g = 0; g < rank_; ++g) {
    if (static_cast<int>(action_[g].size()) != n) {
      throw Error(ErrorCode::InconsistentTable, "permutation length differs from the index");
    }
    for (int i = 0; i < n; ++i) {
      const int j = action_[g][i];
      if (j < 0 || j >= n || inverse_action_[g][j] != -1) {
        throw Error(ErrorCode::InconsistentTable,
                    "generator " + std::to_string(g + 1) + " does not act bijectively");
      }
      inverse_action_[g][j] = i;
    }
  }
  if (!representatives_[0].empty()) {
    throw Error(ErrorCode::InconsistentTable, "the first representative must be the identity");
  }
  for (int i = 0; i < n; ++i) {
    if (representatives_[i].max_generator() > rank_) {
      throw Error(ErrorCode::InconsistentTable, "representative uses an unknown generator");
    }
    if (act(representatives_[i], 0) != i) {
      throw Error(ErrorCode::InconsistentTable,
                  "representative " + std::to_string(i) + " does not reach its coset");
    }
  }

  schreier_words_.assign(static_cast<std::size_t>(n), {});
  schreier_index_.assign(static_cast<std::size_t>(n), std::vector<int>(rank_, -1));
  for (int i = 0; i < n; ++i) {
    for (int g = 1; g <= rank_; ++g) {
      const int j = act(g, i);
      Word h = reduce_word(concat(concat(inverse(representatives_[j]), Word{g}), representatives_[i]));
      if (!h.empty()) {
        schreier_index_[i][g - 1] = static_cast<int>(basis_.size());
        basis_.push_back(h);
      }
      schreier_words_[i].push_back(std::move(h));
    }
  }
}

int CosetTable::act(Letter x, int coset) const {
  const int g = std::abs(x);
  if (g < 1 || g > rank_) throw Error(ErrorCode::InvalidInput, "letter out of range");
  return x > 0 ? action_[g - 1][coset] : inverse_action_[g - 1][coset];
}

int CosetTable::act(const Word& w, int coset) const {
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) coset = act(*it, coset);
  return coset;
}

int CosetTable::schreier_index(int coset, int generator) const {
  return schreier_index_.at(coset).at(generator - 1);
}

const Word& CosetTable::schreier_word(int coset, int generator) const {
  return schreier_words_.at(coset).at(generator - 1);
}

bool CosetTable::has_schreier_transversal() const noexcept {
  return static_cast<int>(basis_.size()) == (rank_ - 1) * index() + 1;
}

CosetRewrite coset_normal_form(const CosetTable& t, const Word& w, int from_coset) {
  if (from_coset < 0 || from_coset >= t.index()) {
    throw Error(ErrorCode::InvalidInput, "coset index out of range");
  }
  // Walk the letters right to left, emitting one Schreier letter per step.
  // For x^-1 acting on coset i with j = x^-1(i): alpha_j^-1 x^-1 alpha_i is the
  // inverse of the Schreier generator (j, x).
  std::vector<Letter> reversed;
  int coset = from_coset;
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) {
    const Letter x = *it;
    const int next = t.act(x, coset);
    if (x > 0) {
      const int s = t.schreier_index(coset, x);
      if (s >= 0) reversed.push_back(s + 1);
    } else {
      const int s = t.schreier_index(next, -x);
      if (s >= 0) reversed.push_back(-(s + 1));
    }
    coset = next;
  }
  CosetRewrite out;
  out.coset = coset;
  out.subgroup = reduce_word(Word(std::vector<Letter>(reversed.rbegin(), reversed.rend())));
  out.ambient = reduce_word(
      concat(concat(inverse(t.representative(coset)), w), t.representative(from_coset)));

  // The two routes must agree; they only differ when the table is broken.
  std::vector<Letter> expanded;
  for (Letter s : out.subgroup) {
    const Word& h = t.schreier_basis().at(static_cast<std::size_t>(std::abs(s) - 1));
    const Word piece = s > 0 ? h : inverse(h);
    expanded.insert(expanded.end(), piece.begin(), piece.end());
  }
  if (reduce_word(Word(std::move(expanded))) != out.ambient) {
    throw Error(ErrorCode::InconsistentTable, "Schreier rewriting disagrees with representatives");
  }
  return out;
}

CosetTable index_two_swap_table(int rank) {
  if (rank < 1) throw Error(ErrorCode::InvalidInput, "rank must be >= 1");
  std::vector<std::vector<int>> action(static_cast<std::size_t>(rank), std::vector<int>{1, 0});
  return CosetTable(rank, std::move(action), {Word{}, Word{1}});
}

}  // namespace relanosov
