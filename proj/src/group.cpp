#include "relanosov/group.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "relanosov/error.hpp"

namespace relanosov {

std::string to_string(PresentationKind kind) {
  switch (kind) {
    case PresentationKind::Free: return "free";
    case PresentationKind::FreeProduct: return "free-product";
    case PresentationKind::Other: return "other";
  }
  return "other";
}

std::string to_string(Field field) { return field == Field::Real ? "real" : "complex"; }

PeripheralSubgroup::PeripheralSubgroup(std::string label, std::vector<Word> generators)
    : label_(std::move(label)) {
  if (generators.empty()) {
    throw Error(ErrorCode::EmptyPeripheral, "peripheral '" + label_ + "' has no generators");
  }
  for (const auto& w : generators) {
    Word r = reduce_word(w);
    if (r.empty()) {
      throw Error(ErrorCode::EmptyPeripheral,
                  "peripheral '" + label_ + "' has a trivial generator");
    }
    generators_.push_back(std::move(r));
  }
}

const Word& PeripheralSubgroup::generator() const {
  if (!is_cyclic()) {
    throw Error(ErrorCode::UnsupportedPresentation,
                "peripheral '" + label_ + "' is not cyclic");
  }
  return generators_.front();
}

std::vector<Word> peripheral_powers(const PeripheralSubgroup& p, int n_max) {
  if (n_max < 1) throw Error(ErrorCode::InvalidInput, "n_max must be >= 1");
  const Word& c = p.generator();
  std::vector<Word> out;
  out.reserve(static_cast<std::size_t>(n_max));
  Word current;
  for (int n = 1; n <= n_max; ++n) {
    current = reduce_word(concat(current, c));
    out.push_back(current);
  }
  return out;
}

namespace {

Matrix normalize_determinant(const Matrix& m, Field field) {
  const auto d = m.rows();
  const Complex det = m.determinant();
  if (std::abs(det) == 0.0 || !std::isfinite(std::abs(det))) {
    throw Error(ErrorCode::InvalidInput, "generator image is singular");
  }
  Complex root;
  if (field == Field::Real) {
    const double re = det.real();
    if (re < 0.0 && d % 2 == 0) {
      throw Error(ErrorCode::InvalidInput,
                  "real generator image with negative determinant in even dimension");
    }
    const double mag = std::pow(std::abs(re), 1.0 / static_cast<double>(d));
    root = re < 0.0 ? -mag : mag;
  } else {
    root = std::pow(det, 1.0 / static_cast<double>(d));
  }
  return m / root;
}

std::vector<double> block_dets(const Matrix& m, const std::vector<std::vector<int>>& blocks) {
  std::vector<double> out;
  if (blocks.size() <= 1) {
    out.assign(blocks.size(), 0.0);
    return out;
  }
  for (const auto& b : blocks) {
    const auto n = static_cast<Eigen::Index>(b.size());
    Matrix sub(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) sub(i, j) = m(b[i], b[j]);
    out.push_back(std::log(std::abs(sub.determinant())));
  }
  return out;
}

int canonical_exponent(long long e, int order) {
  if (order == 0) return static_cast<int>(e);
  long long r = ((e % order) + order) % order;
  if (2 * r > order) r -= order;
  return static_cast<int>(r);
}

}  // namespace

MarkedGroup::MarkedGroup(std::vector<Matrix> images, Field field, PresentationKind kind,
                         std::vector<PeripheralSubgroup> peripherals, std::vector<int> orders)
    : field_(field), kind_(kind), peripherals_(std::move(peripherals)), orders_(std::move(orders)) {
  if (images.empty()) throw Error(ErrorCode::InvalidInput, "a marked group needs generators");
  dim_ = static_cast<int>(images.front().rows());
  if (dim_ < 1) throw Error(ErrorCode::InvalidInput, "dimension must be positive");
  for (const auto& m : images) {
    if (m.rows() != dim_ || m.cols() != dim_) {
      throw Error(ErrorCode::DimensionMismatch, "generator images must all be d x d");
    }
    if (!all_finite(m)) throw Error(ErrorCode::InvalidInput, "non-finite generator entry");
    if (field_ == Field::Real && !is_real(m)) {
      throw Error(ErrorCode::InvalidInput, "real field with complex generator entries");
    }
    images_.push_back(normalize_determinant(m, field_));
  }
  for (const auto& m : images_) inverses_.push_back(m.inverse());

  if (kind_ == PresentationKind::FreeProduct) {
    if (orders_.size() != images_.size()) {
      throw Error(ErrorCode::InvalidInput, "free product needs one order per generator");
    }
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      const int n = orders_[i];
      if (n < 0) throw Error(ErrorCode::InvalidInput, "generator order must be >= 0");
      if (n == 0) continue;
      Matrix p = Matrix::Identity(dim_, dim_);
      for (int j = 0; j < n; ++j) p = p * images_[i];
      const Matrix id = Matrix::Identity(dim_, dim_);
      const double err = std::min((p - id).cwiseAbs().maxCoeff(), (p + id).cwiseAbs().maxCoeff());
      if (err > 1e-9) {
        throw Error(ErrorCode::InvalidInput,
                    "generator " + std::to_string(i + 1) + " image does not have the declared order");
      }
    }
  } else if (!orders_.empty()) {
    throw Error(ErrorCode::InvalidInput, "generator orders are only meaningful for free products");
  }

  for (const auto& p : peripherals_) {
    for (const auto& w : p.generators()) {
      if (w.max_generator() > rank()) {
        throw Error(ErrorCode::InvalidInput,
                    "peripheral '" + p.label() + "' references an unknown generator");
      }
    }
  }
  compute_blocks();
}

void MarkedGroup::compute_blocks() {
  std::vector<int> parent(static_cast<std::size_t>(dim_));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto scan = [&](const Matrix& m) {
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j)
        if (i != j && m(i, j) != Complex(0.0, 0.0)) parent[find(i)] = find(j);
  };
  for (const auto& m : images_) scan(m);
  for (const auto& m : inverses_) scan(m);

  std::vector<std::vector<int>> groups(static_cast<std::size_t>(dim_));
  for (int i = 0; i < dim_; ++i) groups[find(i)].push_back(i);
  blocks_.clear();
  for (auto& g : groups)
    if (!g.empty()) blocks_.push_back(std::move(g));
  std::sort(blocks_.begin(), blocks_.end());

  block_log_dets_.clear();
  inv_block_log_dets_.clear();
  for (std::size_t i = 0; i < images_.size(); ++i) {
    block_log_dets_.push_back(block_dets(images_[i], blocks_));
    inv_block_log_dets_.push_back(block_dets(inverses_[i], blocks_));
  }
}

int MarkedGroup::order(int generator) const {
  if (orders_.empty()) return 0;
  return orders_.at(static_cast<std::size_t>(generator - 1));
}

const Matrix& MarkedGroup::image(Letter x) const {
  const int g = std::abs(x);
  if (g < 1 || g > rank()) throw Error(ErrorCode::InvalidInput, "letter out of range");
  return x > 0 ? images_[g - 1] : inverses_[g - 1];
}

const std::vector<double>& MarkedGroup::block_log_dets(Letter x) const {
  const int g = std::abs(x);
  if (g < 1 || g > rank()) throw Error(ErrorCode::InvalidInput, "letter out of range");
  return x > 0 ? block_log_dets_[g - 1] : inv_block_log_dets_[g - 1];
}

Word MarkedGroup::normal_form(const Word& w) const {
  if (kind_ != PresentationKind::FreeProduct) return reduce_word(w);
  // Syllable stack: (generator, exponent).
  std::vector<std::pair<int, long long>> syl;
  for (Letter x : w) {
    const int g = std::abs(x);
    const int e = x > 0 ? 1 : -1;
    if (!syl.empty() && syl.back().first == g) {
      const int c = canonical_exponent(syl.back().second + e, order(g));
      if (c == 0) {
        syl.pop_back();
      } else {
        syl.back().second = c;
      }
    } else {
      const int c = canonical_exponent(e, order(g));
      if (c != 0) syl.emplace_back(g, c);
    }
  }
  std::vector<Letter> out;
  for (const auto& [g, e] : syl) {
    for (long long i = 0; i < std::llabs(e); ++i) out.push_back(e > 0 ? g : -g);
  }
  return Word(std::move(out));
}

std::vector<Letter> MarkedGroup::next_letters(const Word& prefix) const {
  std::vector<Letter> out;
  const Letter last = prefix.empty() ? 0 : prefix.back();
  std::size_t run = 0;
  if (last != 0) {
    for (auto it = prefix.letters().rbegin(); it != prefix.letters().rend() && *it == last; ++it) ++run;
  }
  for (int s = -rank(); s <= rank(); ++s) {
    if (s == 0 || s == -last) continue;
    if (kind_ == PresentationKind::FreeProduct) {
      const int n = order(std::abs(s));
      if (n != 0) {
        const std::size_t max_run = s > 0 ? static_cast<std::size_t>(n / 2)
                                          : static_cast<std::size_t>((n - 1) / 2);
        const std::size_t length = (s == last) ? run + 1 : 1;
        if (length > max_run) continue;
      }
    }
    out.push_back(s);
  }
  return out;
}

MarkedGroup MarkedGroup::with_images(std::vector<Matrix> images) const {
  return MarkedGroup(std::move(images), field_, kind_, peripherals_, orders_);
}

MarkedGroup MarkedGroup::with_peripherals(std::vector<PeripheralSubgroup> peripherals) const {
  return MarkedGroup(images_, field_, kind_, std::move(peripherals), orders_);
}

namespace {

void extend(const MarkedGroup& g, Word& prefix, std::size_t r, std::vector<Word>& out) {
  if (prefix.size() == r) {
    out.push_back(prefix);
    return;
  }
  for (Letter x : g.next_letters(prefix)) {
    prefix.push_back(x);
    extend(g, prefix, r, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<Word> enumerate_sphere(const MarkedGroup& g, int r) {
  if (g.kind() == PresentationKind::Other) {
    throw Error(ErrorCode::UnsupportedPresentation,
                "exact enumeration needs a free or free-product presentation");
  }
  if (r < 0) throw Error(ErrorCode::InvalidInput, "radius must be >= 0");
  std::vector<Word> out;
  Word prefix;
  extend(g, prefix, static_cast<std::size_t>(r), out);
  return out;
}

std::vector<std::vector<Word>> enumerate_spheres_by_image(const MarkedGroup& g, int r, double tol) {
  if (r < 0) throw Error(ErrorCode::InvalidInput, "radius must be >= 0");
  const int d = g.dim();
  std::vector<Matrix> seen{Matrix::Identity(d, d)};
  std::vector<std::vector<Word>> spheres{{Word{}}};
  std::vector<Matrix> frontier_images{Matrix::Identity(d, d)};
  for (int radius = 1; radius <= r; ++radius) {
    std::vector<Word> sphere;
    std::vector<Matrix> images;
    const auto& prev = spheres.back();
    for (std::size_t i = 0; i < prev.size(); ++i) {
      for (Letter x : g.next_letters(prev[i])) {
        Matrix m = frontier_images[i] * g.image(x);
        const bool dup = std::any_of(seen.begin(), seen.end(), [&](const Matrix& s) {
          return (s - m).cwiseAbs().maxCoeff() <= tol;
        });
        if (dup) continue;
        Word w = prev[i];
        w.push_back(x);
        seen.push_back(m);
        sphere.push_back(std::move(w));
        images.push_back(std::move(m));
      }
    }
    spheres.push_back(std::move(sphere));
    frontier_images = std::move(images);
  }
  return spheres;
}

}  // namespace relanosov
