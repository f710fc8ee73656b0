#pragma once

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string_view>

namespace biovalent {

enum class Ecosystem { terrestrial = 0, freshwater = 1, marine = 2 };

inline constexpr std::array<Ecosystem, 3> kEcosystems{Ecosystem::terrestrial, Ecosystem::freshwater,
                                                      Ecosystem::marine};

/// One value per ecosystem, indexed by `static_cast<int>(Ecosystem)`.
using EcosystemVector = Eigen::Vector3d;

constexpr int index_of(Ecosystem e) noexcept { return static_cast<int>(e); }

constexpr std::string_view to_string(Ecosystem e) noexcept {
  switch (e) {
    case Ecosystem::terrestrial:
      return "terrestrial";
    case Ecosystem::freshwater:
      return "freshwater";
    case Ecosystem::marine:
      return "marine";
  }
  return "";
}

inline std::optional<Ecosystem> parse_ecosystem(std::string_view s) noexcept {
  for (Ecosystem e : kEcosystems)
    if (s == to_string(e)) return e;
  return std::nullopt;
}

}  // namespace biovalent
