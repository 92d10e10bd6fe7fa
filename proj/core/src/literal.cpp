#include <snapmem/errors.hpp>
#include <snapmem/literal.hpp>

#include <algorithm>

namespace snapmem {

Sensorium::Sensorium(std::vector<std::string> names, std::vector<Degree> degrees)
    : names_(std::move(names)), degrees_(std::move(degrees)) {
  if (degrees_.empty()) degrees_.assign(names_.size(), Degree::kState);
  if (degrees_.size() != names_.size()) throw InputError("sensorium: degree list length differs from name list");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    const auto& n = names_[i];
    if (n.empty() || n.back() == '*' || n == "0" || n == "1")
      throw InputError("sensorium: invalid sensor name '" + n + "'");
    if (!index_.emplace(n, i).second) throw InputError("sensorium: duplicate sensor name '" + n + "'");
  }
}

Sensorium Sensorium::anonymous(std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back("s" + std::to_string(i));
  return Sensorium(std::move(names));
}

std::string Sensorium::name(Literal a) const {
  if (a == zero()) return "0";
  if (a == one()) return "1";
  if (!contains(a)) throw InputError("literal index " + std::to_string(a) + " out of range");
  return is_starred(a) ? names_[sensor_of(a)] + "*" : names_[sensor_of(a)];
}

Literal Sensorium::parse(std::string_view text) const {
  if (text == "0") return zero();
  if (text == "1") return one();
  const bool starred = !text.empty() && text.back() == '*';
  if (starred) text.remove_suffix(1);
  const std::size_t i = sensor_index(text);
  return starred ? negative_literal(i) : positive_literal(i);
}

std::size_t Sensorium::sensor_index(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) throw InputError("unknown sensor '" + std::string(name) + "'");
  return it->second;
}

LiteralSet Sensorium::make_set(const std::vector<Literal>& literals) const {
  LiteralSet s = empty_set();
  for (Literal a : literals) {
    if (!contains(a)) throw InputError("literal index " + std::to_string(a) + " out of range");
    s.set(a);
  }
  return s;
}

LiteralSet Sensorium::proper_mask() const {
  LiteralSet s = empty_set();
  for (std::size_t i = 0; i < proper_count(); ++i) s.set(i);
  return s;
}

LiteralSet Sensorium::degree_mask(Degree d) const {
  LiteralSet s = empty_set();
  for (std::size_t i = 0; i < size(); ++i)
    if (degrees_[i] == d) {
      s.set(positive_literal(i));
      s.set(negative_literal(i));
    }
  return s;
}

std::string Sensorium::format(const LiteralSet& s) const {
  std::string out = "{";
  bool first = true;
  s.for_each([&](std::size_t a) {
    if (!first) out += ",";
    out += name(static_cast<Literal>(a));
    first = false;
  });
  return out + "}";
}

Sensorium Sensorium::concat(const Sensorium& a, const Sensorium& b) {
  auto names = a.names_;
  for (std::string n : b.names_) {
    while (std::find(names.begin(), names.end(), n) != names.end()) n += '\'';
    names.push_back(std::move(n));
  }
  auto degrees = a.degrees_;
  degrees.insert(degrees.end(), b.degrees_.begin(), b.degrees_.end());
  return Sensorium(std::move(names), std::move(degrees));
}

bool is_star_selection(const LiteralSet& s) { return !s.intersects(star_set(s)); }

bool is_complete_selection(const Sensorium& sensorium, const LiteralSet& s) {
  if (s.width() != sensorium.literal_count()) return false;
  if (s.test(sensorium.zero()) || s.test(sensorium.one())) return false;
  for (std::size_t i = 0; i < sensorium.size(); ++i)
    if (s.test(positive_literal(i)) == s.test(negative_literal(i))) return false;
  return true;
}

} // namespace snapmem
