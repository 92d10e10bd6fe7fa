#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <snapmem/bitset.hpp>

namespace snapmem {

/**
 * Literal index. Sensor i owns literals 2i (positive) and 2i+1 (starred).
 * For a sensorium with n sensors, 2n is ZERO and 2n+1 is ONE, so star()
 * is XOR with 1 for every literal including the virtual pair.
 */
using Literal = std::uint32_t;

constexpr Literal star(Literal a) { return a ^ 1u; }
constexpr Literal positive_literal(std::size_t sensor) { return static_cast<Literal>(2 * sensor); }
constexpr Literal negative_literal(std::size_t sensor) { return static_cast<Literal>(2 * sensor + 1); }
constexpr std::size_t sensor_of(Literal a) { return a >> 1; }
constexpr bool is_starred(Literal a) { return a & 1u; }

/** Set of literals of one sensorium (width 2n+2). */
using LiteralSet = Bitset;

/** Sensor degree: 0 for state sensors, 1 for transition sensors. */
enum class Degree : std::uint8_t { kState = 0, kTransition = 1 };

/**
 * Indexed sensor symbols closed under star, plus the virtual ZERO/ONE pair.
 */
class Sensorium {
public:
  Sensorium() = default;
  /** Names must be unique, non-empty and must not end in '*'. */
  explicit Sensorium(std::vector<std::string> names, std::vector<Degree> degrees = {});

  /** Sensors named "s0", "s1", ... */
  static Sensorium anonymous(std::size_t n);

  std::size_t size() const { return names_.size(); }
  std::size_t literal_count() const { return 2 * names_.size() + 2; }
  std::size_t proper_count() const { return 2 * names_.size(); }
  Literal zero() const { return static_cast<Literal>(2 * names_.size()); }
  Literal one() const { return static_cast<Literal>(2 * names_.size() + 1); }
  bool is_proper(Literal a) const { return a < proper_count(); }
  bool contains(Literal a) const { return a < literal_count(); }

  const std::string& sensor_name(std::size_t i) const { return names_.at(i); }
  Degree degree(std::size_t i) const { return degrees_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Degree>& degrees() const { return degrees_; }

  /** Text form: "a", "a*", "0", "1". */
  std::string name(Literal a) const;
  /** Inverse of name(); throws InputError for unknown text. */
  Literal parse(std::string_view text) const;
  std::size_t sensor_index(std::string_view name) const;

  LiteralSet empty_set() const { return LiteralSet(literal_count()); }
  LiteralSet make_set(const std::vector<Literal>& literals) const;
  /** All proper literals. */
  LiteralSet proper_mask() const;
  /** Both literals of every sensor of the given degree. */
  LiteralSet degree_mask(Degree d) const;
  std::string format(const LiteralSet& s) const;

  /** Sensors of a followed by sensors of b; clashing names of b get a trailing ' . */
  static Sensorium concat(const Sensorium& a, const Sensorium& b);

  friend bool operator==(const Sensorium& a, const Sensorium& b) {
    return a.names_ == b.names_ && a.degrees_ == b.degrees_;
  }

private:
  std::vector<std::string> names_;
  std::vector<Degree> degrees_;
  std::unordered_map<std::string, std::size_t> index_;
};

/** Image of a set under star. */
inline LiteralSet star_set(const LiteralSet& s) { return s.pair_swapped(); }

/** True iff s holds at most one literal of each pair. */
bool is_star_selection(const LiteralSet& s);
/** True iff s holds exactly one literal of every proper pair and no virtual literal. */
bool is_complete_selection(const Sensorium& sensorium, const LiteralSet& s);

} // namespace snapmem
