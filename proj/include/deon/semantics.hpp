#ifndef DEON_SEMANTICS_HPP
#define DEON_SEMANTICS_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "deon/formula.hpp"

namespace deon {

using World = std::size_t;

// Finite bimodal Kripke model. Worlds are dense indices with display names.
class KripkeModel {
public:
  World addWorld(std::string name);
  void addEdge(Modality m, World from, World to);
  void setTrue(World w, const std::string& atom);

  std::size_t size() const noexcept { return names_.size(); }
  World root() const noexcept { return root_; }
  void setRoot(World w);

  const std::string& name(World w) const { return names_.at(w); }
  World find(std::string_view name) const;  // throws std::out_of_range
  const std::vector<World>& successors(Modality m, World w) const {
    return successors_[index(m)].at(w);
  }
  const std::set<std::string>& trueAtoms(World w) const { return valuation_.at(w); }
  bool holds(World w, const std::string& atom) const { return valuation_.at(w).count(atom) > 0; }

  friend bool operator==(const KripkeModel&, const KripkeModel&) = default;

private:
  std::vector<std::string> names_;
  std::array<std::vector<std::vector<World>>, 2> successors_;
  std::vector<std::set<std::string>> valuation_;
  World root_ = 0;
};

struct SerialityViolation {
  World world;
  Modality modality;
  friend bool operator==(const SerialityViolation&, const SerialityViolation&) = default;
};

// Every (world, modality) pair lacking a successor; empty means serial.
std::vector<SerialityViolation> validateSerial(const KripkeModel& m);

// Satisfaction of a surface formula (defined forms are expanded first).
// Throws std::out_of_range for an unknown world.
bool check(const KripkeModel& m, World w, const Formula& f);
bool check(const KripkeModel& m, std::string_view world, const Formula& f);

// Worlds where the formula holds, indexed by World.
std::vector<bool> extension(const KripkeModel& m, const Formula& f);

// Exhaustive search over serial models with at most maxWorlds worlds for one
// falsifying f at its root. Smaller models are tried first. std::nullopt only
// means nothing exists within the bound.
std::optional<KripkeModel> boundedCountermodel(const Formula& f, std::size_t maxWorlds);

nlohmann::json toJson(const KripkeModel& m);
// One line per world: name, true atoms and successors per relation.
std::string renderModel(const KripkeModel& m);
KripkeModel modelFromJson(const nlohmann::json& j);

}  // namespace deon

#endif  // DEON_SEMANTICS_HPP
