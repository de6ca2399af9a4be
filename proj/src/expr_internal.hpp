#pragma once

#include <cstdint>
#include <vector>

#include "tpq/expr.hpp"

namespace tpq::detail {

struct AtomData {
  AtomKind kind = AtomKind::Coordinate;
  int index = 0;         // coordinate or opaque-symbol index
  std::vector<int> jet;  // sorted derivative multiset (Jet only)
  friend auto operator<=>(const AtomData&, const AtomData&) = default;
};

std::uint32_t intern_atom(const AtomData& a);
const AtomData& atom_data(std::uint32_t id);
/// Jet atom `id` with one more derivative along `coord`.
std::uint32_t jet_extended(std::uint32_t id, int coord);

std::uint32_t intern_exp(const ExpArgument& arg);
const ExpArgument& exp_data(std::uint32_t id);

}  // namespace tpq::detail
