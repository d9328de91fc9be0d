#pragma once

#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ntbea/errors.hpp"
#include "ntbea/random.hpp"

namespace ntbea {

// A concrete parameter value. Search spaces mix integer, real and boolean
// parameters, so each dimension holds a list of tagged scalars.
using Value = std::variant<std::int64_t, double, bool>;

// A point is a vector of value indices, one per dimension.
using Point = std::vector<int>;

inline std::string to_string(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, double>) {
          std::ostringstream os;
          os.precision(17);
          os << x;
          std::string s = os.str();
          if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
          return s;
        } else {
          return std::to_string(x);
        }
      },
      v);
}

inline double as_double(const Value& v) {
  return std::visit([](auto x) { return static_cast<double>(x); }, v);
}

inline std::int64_t as_int(const Value& v) {
  return std::visit([](auto x) { return static_cast<std::int64_t>(x); }, v);
}

inline bool as_bool(const Value& v) {
  return std::visit([](auto x) { return x != decltype(x){}; }, v);
}

inline std::string to_string(const Point& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(p[i]);
  }
  return s + "]";
}

struct Dimension {
  std::string name;
  std::vector<Value> values;

  bool operator==(const Dimension&) const = default;
};

// Finite discrete search space. Immutable after construction.
class SearchSpace {
 public:
  static constexpr std::uint64_t kMaxSize = std::uint64_t{1} << 62;

  SearchSpace() = default;

  explicit SearchSpace(std::vector<Dimension> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw ConfigError("search space needs at least one dimension");
    size_ = 1;
    arities_.reserve(dims_.size());
    for (const auto& d : dims_) {
      if (d.values.empty()) {
        throw ConfigError("dimension '" + d.name + "' has no values");
      }
      const auto arity = static_cast<std::uint64_t>(d.values.size());
      if (size_ > kMaxSize / arity) {
        throw ConfigError("search space larger than 2^62 points");
      }
      size_ *= arity;
      arities_.push_back(static_cast<int>(arity));
    }
  }

  // Space whose values are the plain indices 0..arity-1.
  static SearchSpace from_arities(const std::vector<int>& arities) {
    std::vector<Dimension> dims;
    for (std::size_t i = 0; i < arities.size(); ++i) {
      Dimension d{"x" + std::to_string(i), {}};
      for (int v = 0; v < arities[i]; ++v) d.values.emplace_back(std::int64_t{v});
      dims.push_back(std::move(d));
    }
    return SearchSpace(std::move(dims));
  }

  std::size_t dimensions() const { return dims_.size(); }
  const std::vector<int>& arities() const { return arities_; }
  int arity(std::size_t i) const { return arities_.at(i); }
  std::uint64_t size() const { return size_; }
  const std::string& name(std::size_t i) const { return dims_.at(i).name; }
  const std::vector<Value>& values(std::size_t i) const { return dims_.at(i).values; }
  const std::vector<Dimension>& dims() const { return dims_; }

  int index_of(const std::string& name) const {
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      if (dims_[i].name == name) return static_cast<int>(i);
    }
    return -1;
  }

  bool contains(const Point& p) const {
    if (p.size() != arities_.size()) return false;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] < 0 || p[i] >= arities_[i]) return false;
    }
    return true;
  }

  void check(const Point& p) const {
    if (!contains(p)) {
      throw InvariantError("point " + to_string(p) + " is not in the search space");
    }
  }

  template <typename Engine>
  Point random_point(Engine& rng) const {
    Point p(arities_.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = uniform_index(rng, arities_[i]);
    return p;
  }

  std::vector<Value> value_of(const Point& p) const {
    check(p);
    std::vector<Value> out;
    out.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out.push_back(dims_[i].values[p[i]]);
    return out;
  }

  // Lexicographic order, last dimension varying fastest.
  Point point_at(std::uint64_t rank) const {
    if (rank >= size_) throw InvariantError("rank out of range");
    Point p(arities_.size());
    for (std::size_t i = arities_.size(); i-- > 0;) {
      p[i] = static_cast<int>(rank % arities_[i]);
      rank /= arities_[i];
    }
    return p;
  }

  std::uint64_t rank_of(const Point& p) const {
    check(p);
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < p.size(); ++i) r = r * arities_[i] + p[i];
    return r;
  }

  bool operator==(const SearchSpace&) const = default;

 private:
  std::vector<Dimension> dims_;
  std::vector<int> arities_;
  std::uint64_t size_ = 0;
};

// Parses a value literal: true/false, integers, otherwise reals.
inline Value parse_value(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (c != ' ' && c != '\t') s += c;
  }
  if (s == "true") return true;
  if (s == "false") return false;
  if (s.empty()) throw ConfigError("empty value literal");
  std::size_t used = 0;
  try {
    if (s.find_first_of(".eE") == std::string::npos) {
      auto v = std::stoll(s, &used);
      if (used == s.size()) return std::int64_t{v};
    } else {
      auto v = std::stod(s, &used);
      if (used == s.size()) return v;
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("cannot parse value '" + text + "'");
}

}  // namespace ntbea
