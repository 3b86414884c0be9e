#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relanosov/coset.hpp"
#include "relanosov/diagnose.hpp"
#include "relanosov/group.hpp"

namespace relanosov {

struct GalleryItem {
  std::string name;
  MarkedGroup group;
  int k = 1;
  std::optional<Tag> expected;  // empty when no claim is attached
  std::string provenance;
  std::vector<int> block_sizes;  // consecutive diagonal blocks of peripheral images
  double freeness_margin = 0.0;  // Schottky self-check: min distance between distinct words
};

// a = [[1,2],[0,1]], b = [[1,0],[2,1]] with peripherals <a>, <b>, <a^-1 b>.
GalleryItem make_cusped_free_group();

// g1 = diag(lambda, 1/lambda), g2 = R_theta g1 R_theta^-1. Every reduced
// word of length <= 6 (1457 of them) must map to a distinct matrix, at
// max-entry distance above 1e-6; FreenessCheckFailed otherwise.
GalleryItem make_schottky(double lambda = 4.0, double theta = 0.7853981633974483);

// Both generators mapped to the identity.
GalleryItem make_trivial(int rank = 2, int d = 2);

// Block-diagonal sum on the same free group; peripherals are the union.
GalleryItem make_direct_sum(const GalleryItem& x, const GalleryItem& y);

// Induction from the subgroup of the coset table: block (j, i) of the image
// of a generator x is rho_1(alpha_j^-1 x alpha_i) when x sends coset i to j.
// `sub_rep` is indexed by the Schreier basis of t. k is set to the index,
// one singular direction per coset block.
GalleryItem make_induced(const MarkedGroup& sub_rep, const CosetTable& t,
                         std::vector<PeripheralSubgroup> peripherals = {}, std::string name = "induced");

// Index-2 cover of the rank-2 free group, basis [Ab, aa, ba] mapped to a
// ping-pong triple: Ab parabolic (translation by 10), aa and ba hyperbolic.
// Peripheral <Ab> of the ambient group.
GalleryItem make_induced_mixed();

enum class BlockKind { Parabolic, Hyperbolic, EllipticOrOther };
std::string to_string(BlockKind k);

struct BlockClass {
  int block = 0;
  BlockKind kind = BlockKind::EllipticOrOther;
  double trace = 0.0;  // of the block normalized to unit |det|
};

struct PeripheralStructure {
  std::string element;  // peripheral label, or generator name when there are none
  Word word;
  std::vector<BlockClass> blocks;
};

// Classifies each diagonal block of every peripheral generator image (every
// generator image when the item has no peripherals). NotBlockStructured when
// an image has nonzero entries off the declared blocks.
std::vector<PeripheralStructure> peripheral_structure_report(const GalleryItem& item);

std::vector<std::string> gallery_names();
// Throws ConfigError for unknown names.
GalleryItem make_gallery_item(const std::string& name);

}  // namespace relanosov
