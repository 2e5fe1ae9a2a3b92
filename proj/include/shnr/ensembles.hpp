#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "shnr/space.hpp"

namespace shnr {

enum class Family { generic, a_selfadjoint, a_positive, nilpotent_classical, normal_classical };

std::string_view to_string(Family f);
std::optional<Family> parse_family(std::string_view name);

/// A reproducible random campaign. Every instance is a pure function of
/// (seed, trial index, operand stream).
struct EnsembleSpec {
  Eigen::Index dim = 2;
  Eigen::Index rank = 2;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  Family family = Family::generic;

  void validate() const;
};

/// A = G^* D G scaled to ||A||_2 = 1, with G complex Ginibre and D holding
/// `rank` positive entries. The classical families return the identity and
/// throw FamilyNeedsIdentityA when rank < dim.
SemiHilbertSpace gen_space(const EnsembleSpec& spec, std::size_t trial);

/// A random operator in B_A(H) of the spec's family. Distinct streams give
/// independent operands of the same trial (T = 0, S = 1, R = 2).
CMatrix gen_operator(const EnsembleSpec& spec, const SemiHilbertSpace& sp, std::size_t trial,
                     std::uint64_t stream = 0);

}  // namespace shnr
