#include "biovalent/mrio.hpp"

#include <unordered_set>

namespace biovalent::mrio {

namespace {

void require_unique(const std::vector<std::string>& codes, const char* what) {
  std::unordered_set<std::string> seen;
  for (const auto& c : codes) {
    if (c.empty()) throw StructuralError(std::string("empty ") + what + " code");
    if (c.find(':') != std::string::npos)
      throw StructuralError(std::string(what) + " code \"" + c + "\" contains ':'");
    if (!seen.insert(c).second) throw StructuralError(std::string("duplicate ") + what + " code \"" + c + "\"");
  }
}

std::optional<std::size_t> find_code(const std::vector<std::string>& codes, std::string_view code) {
  auto it = std::find(codes.begin(), codes.end(), code);
  if (it == codes.end()) return std::nullopt;
  return static_cast<std::size_t>(it - codes.begin());
}

}  // namespace

RegionSectorIndex::RegionSectorIndex(std::vector<std::string> regions, std::vector<std::string> sectors)
    : regions_(std::move(regions)), sectors_(std::move(sectors)) {
  require_unique(regions_, "region");
  require_unique(sectors_, "sector");
}

std::optional<std::size_t> RegionSectorIndex::find_region(std::string_view code) const {
  return find_code(regions_, code);
}

std::optional<std::size_t> RegionSectorIndex::find_sector(std::string_view code) const {
  return find_code(sectors_, code);
}

std::size_t RegionSectorIndex::region(std::string_view code) const {
  if (auto r = find_region(code)) return *r;
  throw StructuralError("unknown region \"" + std::string(code) + "\"");
}

std::size_t RegionSectorIndex::sector(std::string_view code) const {
  if (auto s = find_sector(code)) return *s;
  throw StructuralError("unknown sector \"" + std::string(code) + "\"");
}

std::size_t RegionSectorIndex::position(std::string_view region_code, std::string_view sector_code) const {
  return position(region(region_code), sector(sector_code));
}

std::string RegionSectorIndex::label(std::size_t pos) const {
  return regions_.at(region_of(pos)) + ":" + sectors_.at(sector_of(pos));
}

std::size_t RegionSectorIndex::position_of_label(std::string_view text) const {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw StructuralError("label \"" + std::string(text) + "\" is not of the form region:sector");
  return position(text.substr(0, colon), text.substr(colon + 1));
}

}  // namespace biovalent::mrio
