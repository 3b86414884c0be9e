#pragma once

#include <vector>

#include "relanosov/word.hpp"

namespace relanosov {

// Left cosets alpha_0 H, ..., alpha_{n-1} H of a finite-index subgroup H of a
// free group, with the left-multiplication action of each generator.
// Cosets are 0-based here; alpha_0 is the identity.
//
// Words act right to left: w = x_1 ... x_m sends coset i to
// x_1(x_2(...(x_m(i)))), matching w * alpha_i = alpha_j * h with h in H.
class CosetTable {
 public:
  // action[g][i] is the coset that generator g+1 sends coset i to.
  // Throws InconsistentTable if an action is not a bijection, if
  // representative i does not send coset 0 to coset i, or if alpha_0 is not
  // the identity.
  CosetTable(int rank, std::vector<std::vector<int>> action, std::vector<Word> representatives);

  int index() const noexcept { return static_cast<int>(representatives_.size()); }
  int rank() const noexcept { return rank_; }
  const Word& representative(int coset) const { return representatives_.at(coset); }
  const std::vector<Word>& representatives() const noexcept { return representatives_; }
  const std::vector<std::vector<int>>& action() const noexcept { return action_; }

  int act(Letter x, int coset) const;
  int act(const Word& w, int coset) const;

  // True when w lies in the subgroup (fixes coset 0).
  bool in_subgroup(const Word& w) const { return act(w, 0) == 0; }

  // Schreier generator for (coset i, generator x): alpha_j^-1 x alpha_i with
  // j = x(i), freely reduced. Index into schreier_basis() or -1 when the
  // generator is freely trivial.
  int schreier_index(int coset, int generator) const;
  const Word& schreier_word(int coset, int generator) const;

  // The nontrivial Schreier generators; a free basis of the subgroup when
  // the representatives form a Schreier transversal.
  const std::vector<Word>& schreier_basis() const noexcept { return basis_; }

  // (rank - 1) * index + 1 nontrivial Schreier generators, which holds
  // exactly for Schreier transversals.
  bool has_schreier_transversal() const noexcept;

 private:
  int rank_;
  std::vector<std::vector<int>> action_;
  std::vector<std::vector<int>> inverse_action_;
  std::vector<Word> representatives_;
  std::vector<std::vector<Word>> schreier_words_;  // [coset][generator-1]
  std::vector<std::vector<int>> schreier_index_;   // [coset][generator-1]
  std::vector<Word> basis_;
};

struct CosetRewrite {
  int coset = 0;    // j with w * alpha_i = alpha_j * h
  Word ambient;     // h = alpha_j^-1 w alpha_i in the ambient generators, reduced
  Word subgroup;    // h in the Schreier basis letters (+/- basis index + 1), reduced
};

// Rewrites w across the coset representatives starting from coset i.
CosetRewrite coset_normal_form(const CosetTable& t, const Word& w, int from_coset = 0);

// The index-2 subgroup of the free group of the given rank in which every
// generator swaps the two cosets; representatives {e, a}.
CosetTable index_two_swap_table(int rank);

}  // namespace relanosov
