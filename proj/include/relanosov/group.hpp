#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "relanosov/linalg.hpp"
#include "relanosov/word.hpp"

namespace relanosov {

enum class PresentationKind { Free, FreeProduct, Other };

std::string to_string(PresentationKind kind);
std::string to_string(Field field);

// A peripheral subgroup given by its generators, written as words in the
// ambient generators. The cyclic case <c> has a single generator.
class PeripheralSubgroup {
 public:
  // Throws EmptyPeripheral when the reduced generator list is empty or any
  // generator reduces to the identity.
  PeripheralSubgroup(std::string label, std::vector<Word> generators);

  static PeripheralSubgroup cyclic(std::string label, const Word& generator) {
    return PeripheralSubgroup(std::move(label), {generator});
  }

  const std::string& label() const noexcept { return label_; }
  const std::vector<Word>& generators() const noexcept { return generators_; }
  bool is_cyclic() const noexcept { return generators_.size() == 1; }

  // The cyclic generator c. Throws UnsupportedPresentation for
  // multi-generator peripherals.
  const Word& generator() const;

 private:
  std::string label_;
  std::vector<Word> generators_;
};

// c, c^2, ..., c^{n_max}, each freely reduced.
std::vector<Word> peripheral_powers(const PeripheralSubgroup& p, int n_max);

// Generators with their matrix images in SL(d, K), a presentation tag and
// the declared peripheral structure. Immutable after construction.
class MarkedGroup {
 public:
  // Images are normalized to unit determinant. For a free product, `orders`
  // holds the order of each generator (0 = infinite); it must be empty for
  // the other kinds.
  MarkedGroup(std::vector<Matrix> images, Field field,
              PresentationKind kind = PresentationKind::Free,
              std::vector<PeripheralSubgroup> peripherals = {},
              std::vector<int> orders = {});

  int rank() const noexcept { return static_cast<int>(images_.size()); }
  int dim() const noexcept { return dim_; }
  Field field() const noexcept { return field_; }
  PresentationKind kind() const noexcept { return kind_; }
  const std::vector<PeripheralSubgroup>& peripherals() const noexcept { return peripherals_; }
  // 0 means infinite order.
  int order(int generator) const;
  const std::vector<int>& orders() const noexcept { return orders_; }

  // Image of a signed letter.
  const Matrix& image(Letter x) const;
  const std::vector<Matrix>& images() const noexcept { return images_; }

  // log|det| of each diagonal block of the image of a letter, in the order
  // of blocks(). Zero when there is a single block.
  const std::vector<double>& block_log_dets(Letter x) const;

  // Partition of {0..d-1} into index sets such that every generator image is
  // block diagonal with respect to it. A single block when nothing splits.
  const std::vector<std::vector<int>>& blocks() const noexcept { return blocks_; }

  // Canonical form of w for this presentation: free reduction for free and
  // "other" groups, syllable normal form for free products of cyclics.
  Word normal_form(const Word& w) const;

  // Letters allowed to follow `prefix` in a normal-form word, in increasing
  // order. Drives enumeration and random sampling.
  std::vector<Letter> next_letters(const Word& prefix) const;

  MarkedGroup with_images(std::vector<Matrix> images) const;
  MarkedGroup with_peripherals(std::vector<PeripheralSubgroup> peripherals) const;

 private:
  void compute_blocks();

  int dim_ = 0;
  Field field_ = Field::Real;
  PresentationKind kind_ = PresentationKind::Free;
  std::vector<Matrix> images_;
  std::vector<Matrix> inverses_;
  std::vector<PeripheralSubgroup> peripherals_;
  std::vector<int> orders_;
  std::vector<std::vector<int>> blocks_;
  std::vector<std::vector<double>> block_log_dets_;      // per generator
  std::vector<std::vector<double>> inv_block_log_dets_;  // per generator
};

// All normal-form words of length exactly r in lexicographic order. Exact for
// free and free-product presentations; throws UnsupportedPresentation
// otherwise.
std::vector<Word> enumerate_sphere(const MarkedGroup& g, int r);

// Spheres 0..r for any presentation, identifying words whose matrix images
// agree within `tol` (max-entry distance). Heuristic: distinct elements with
// equal images are merged, and the first word found in lexicographic BFS
// order represents each class.
std::vector<std::vector<Word>> enumerate_spheres_by_image(const MarkedGroup& g, int r,
                                                          double tol = 1e-8);

// Uniform choice among the allowed next letters at every step, rejecting
// letters for which `reject(prefix + letter)` is true. Falls back to any
// allowed letter when every choice would be rejected.
template <class Reject>
Word random_normal_form(const MarkedGroup& g, Word prefix, std::size_t length,
                        std::mt19937_64& rng, Reject reject) {
  while (prefix.size() < length) {
    const auto options = g.next_letters(prefix);
    std::vector<Letter> ok;
    for (Letter x : options) {
      Word trial = prefix;
      trial.push_back(x);
      if (!reject(trial)) ok.push_back(x);
    }
    const auto& pool = ok.empty() ? options : ok;
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    prefix.push_back(pool[pick(rng)]);
  }
  return prefix;
}

}  // namespace relanosov
