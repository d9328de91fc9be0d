#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ntbea/errors.hpp"
#include "ntbea/random.hpp"
#include "ntbea/search_space.hpp"

namespace ntbea {

// Running (count, sum, sum of squares) summary of the fitness samples that
// landed on one lookup-table entry.
struct StatSummary {
  std::int64_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    ++count;
    sum += x;
    sum_sq += x * x;
  }

  double mean() const { return count > 0 ? sum / count : 0.0; }

  double variance() const {
    if (count == 0) return 0.0;
    const double m = mean();
    return std::max(0.0, sum_sq / count - m * m);
  }

  double std_dev() const { return std::sqrt(variance()); }
  double std_err() const { return count > 0 ? std::sqrt(variance() / count) : 0.0; }

  bool operator==(const StatSummary&) const = default;
};

struct UcbParams {
  double k = 1.0;
  double epsilon = 0.5;
  // Exploitation term used for entries that have never been sampled.
  double default_mean = 0.0;
};

// UCB1 value of one arm with the epsilon-softened denominator:
//   mean + k * sqrt(ln(total) / (count + epsilon)).
// ln is taken of max(total, 1) so an empty bandit contributes no exploration.
inline double ucb_entry(const StatSummary& s, std::int64_t total, const UcbParams& p) {
  if (!(p.epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  if (total < s.count) throw InvariantError("arm count exceeds bandit total");
  const double exploit = s.count > 0 ? s.mean() : p.default_mean;
  const double log_total = std::log(static_cast<double>(std::max<std::int64_t>(total, 1)));
  return exploit + p.k * std::sqrt(log_total / (static_cast<double>(s.count) + p.epsilon));
}

// One projection of the search space onto a subset of dimensions, with a
// sparse lookup table keyed by the projected sub-pattern.
class NTuple {
 public:
  NTuple(std::vector<int> dims, const std::vector<int>& arities) : dims_(std::move(dims)) {
    if (dims_.empty()) throw ConfigError("an n-tuple needs at least one dimension");
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      if (dims_[i] < 0 || dims_[i] >= static_cast<int>(arities.size()) ||
          (i > 0 && dims_[i] <= dims_[i - 1])) {
        throw ConfigError("n-tuple dimensions must be strictly increasing and in range");
      }
      radix_.push_back(arities[dims_[i]]);
    }
  }

  const std::vector<int>& dims() const { return dims_; }
  std::int64_t total() const { return total_; }

  // Mixed-radix key of the sub-pattern; the first tuple dimension is the most
  // significant digit so key order matches lexicographic pattern order.
  std::uint64_t key(const Point& p) const {
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < dims_.size(); ++i) k = k * radix_[i] + p[dims_[i]];
    return k;
  }

  std::vector<int> pattern(std::uint64_t key) const {
    std::vector<int> out(dims_.size());
    for (std::size_t i = dims_.size(); i-- > 0;) {
      out[i] = static_cast<int>(key % radix_[i]);
      key /= radix_[i];
    }
    return out;
  }

  void add(const Point& p, double fitness) {
    lut_[key(p)].add(fitness);
    ++total_;
  }

  // Summary at the point's sub-pattern; empty if never sampled.
  StatSummary stats(const Point& p) const {
    auto it = lut_.find(key(p));
    return it == lut_.end() ? StatSummary{} : it->second;
  }

  const std::map<std::uint64_t, StatSummary>& entries() const { return lut_; }

  bool operator==(const NTuple&) const = default;

 private:
  std::vector<int> dims_;
  std::vector<int> radix_;
  std::map<std::uint64_t, StatSummary> lut_;
  std::int64_t total_ = 0;
};

struct TupleFlags {
  bool one = true;
  bool two = true;
  bool full = true;

  bool operator==(const TupleFlags&) const = default;
};

// All 1-tuples, then all 2-tuples in lexicographic pair order, then the
// single d-tuple, as selected by the flags. Overlapping tuples (e.g. the
// 2-tuple and the d-tuple when d == 2) are kept.
inline std::vector<NTuple> generate_tuples(const SearchSpace& space, TupleFlags flags) {
  if (!flags.one && !flags.two && !flags.full) {
    throw ConfigError("at least one of the 1-, 2- or d-tuple sets must be enabled");
  }
  const int d = static_cast<int>(space.dimensions());
  std::vector<NTuple> out;
  if (flags.one) {
    for (int i = 0; i < d; ++i) out.emplace_back(std::vector<int>{i}, space.arities());
  }
  if (flags.two) {
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) out.emplace_back(std::vector<int>{i, j}, space.arities());
    }
  }
  if (flags.full) {
    std::vector<int> all(d);
    for (int i = 0; i < d; ++i) all[i] = i;
    out.emplace_back(std::move(all), space.arities());
  }
  return out;
}

struct Sample {
  Point point;
  double fitness;

  bool operator==(const Sample&) const = default;
};

struct ReportRow {
  std::size_t tuple = 0;
  std::vector<int> dims;
  std::string pattern;  // wildcard form, e.g. [1,*,*,*,*]
  std::int64_t count = 0;
  double mean = 0.0;
  double std_err = 0.0;
};

// The bandit fitness-landscape model: a set of n-tuples plus the log of every
// sample added. Single writer; concurrent readers are fine between writes.
class NTupleSystem {
 public:
  NTupleSystem(SearchSpace space, TupleFlags flags)
      : space_(std::move(space)), flags_(flags), tuples_(generate_tuples(space_, flags)) {}

  const SearchSpace& space() const { return space_; }
  TupleFlags flags() const { return flags_; }
  const std::vector<NTuple>& tuples() const { return tuples_; }
  const std::vector<Sample>& samples() const { return samples_; }
  std::size_t sample_count() const { return samples_.size(); }

  void add_sample(const Point& p, double fitness) {
    space_.check(p);
    for (auto& t : tuples_) t.add(p, fitness);
    samples_.push_back({p, fitness});
  }

  // Average of the per-tuple UCB values at the point's sub-patterns.
  double ucb(const Point& p, const UcbParams& params) const {
    double acc = 0.0;
    for (const auto& t : tuples_) acc += ucb_entry(t.stats(p), t.total(), params);
    return acc / static_cast<double>(tuples_.size());
  }

  // Exploitation-only aggregate (k = 0).
  double mean_estimate(const Point& p, double default_mean = 0.0) const {
    UcbParams params;
    params.k = 0.0;
    params.default_mean = default_mean;
    return ucb(p, params);
  }

  std::vector<ReportRow> report() const {
    std::vector<ReportRow> rows;
    const std::size_t d = space_.dimensions();
    for (std::size_t ti = 0; ti < tuples_.size(); ++ti) {
      const auto& t = tuples_[ti];
      // For d <= 2 the full tuple repeats a lower-order one; list it once.
      bool repeat = false;
      for (std::size_t tj = 0; tj < ti; ++tj) repeat = repeat || tuples_[tj].dims() == t.dims();
      if (repeat) continue;
      for (const auto& [key, s] : t.entries()) {
        if (s.count == 0) continue;
        std::vector<std::string> cells(d, "*");
        const auto pat = t.pattern(key);
        for (std::size_t i = 0; i < pat.size(); ++i) cells[t.dims()[i]] = std::to_string(pat[i]);
        std::string text = "[";
        for (std::size_t i = 0; i < d; ++i) text += (i ? "," : "") + cells[i];
        text += "]";
        rows.push_back({ti, t.dims(), std::move(text), s.count, s.mean(), s.std_err()});
      }
    }
    return rows;
  }

  bool operator==(const NTupleSystem&) const = default;

 private:
  SearchSpace space_;
  TupleFlags flags_;
  std::vector<NTuple> tuples_;
  std::vector<Sample> samples_;
};

// Aggregate UCB with a uniform [0, noise) tie-breaking perturbation.
template <typename Engine>
double ucb_value(const NTupleSystem& system, const Point& p, const UcbParams& params,
                 Engine& rng, double noise = 1e-6) {
  const double v = system.ucb(p, params);
  return noise > 0.0 ? v + uniform_real(rng, 0.0, noise) : v;
}

inline std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline void write_report_csv(std::ostream& os, const std::vector<ReportRow>& rows) {
  os << "tuple_dims,pattern,count,mean,std_err\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.dims.size(); ++i) os << (i ? ";" : "") << r.dims[i];
    os << ",\"" << r.pattern << "\"," << r.count << ',' << format_double(r.mean) << ','
       << format_double(r.std_err) << '\n';
  }
}

inline void write_report_text(std::ostream& os, const std::vector<ReportRow>& rows) {
  std::size_t current = static_cast<std::size_t>(-1);
  for (const auto& r : rows) {
    if (r.tuple != current) {
      current = r.tuple;
      os << r.dims.size() << "-tuple {";
      for (std::size_t i = 0; i < r.dims.size(); ++i) os << (i ? "," : "") << r.dims[i];
      os << "}\n";
    }
    char line[160];
    std::snprintf(line, sizeof line, "  %-24s mean %12.6g  n %6lld  se %10.4g\n",
                  r.pattern.c_str(), r.mean, static_cast<long long>(r.count), r.std_err);
    os << line;
  }
}

// Line-per-sample log: comma-joined point indices followed by the fitness.
inline void write_sample_log(std::ostream& os, const std::vector<Sample>& samples) {
  for (const auto& s : samples) {
    for (int v : s.point) os << v << ',';
    os << format_double(s.fitness) << '\n';
  }
}

inline std::vector<Sample> read_sample_log(std::istream& is) {
  std::vector<Sample> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() < 2) {
      throw ConfigError("sample log line " + std::to_string(lineno) + ": too few fields");
    }
    Sample s;
    for (std::size_t i = 0; i + 1 < fields.size(); ++i) {
      int v = 0;
      auto [ptr, ec] = std::from_chars(fields[i].data(), fields[i].data() + fields[i].size(), v);
      if (ec != std::errc{} || ptr != fields[i].data() + fields[i].size()) {
        throw ConfigError("sample log line " + std::to_string(lineno) + ": bad index");
      }
      s.point.push_back(v);
    }
    const auto& last = fields.back();
    auto [ptr, ec] = std::from_chars(last.data(), last.data() + last.size(), s.fitness);
    if (ec != std::errc{} || ptr != last.data() + last.size()) {
      throw ConfigError("sample log line " + std::to_string(lineno) + ": bad fitness");
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline NTupleSystem rebuild_system(const SearchSpace& space, TupleFlags flags,
                                   const std::vector<Sample>& samples) {
  NTupleSystem sys(space, flags);
  for (const auto& s : samples) sys.add_sample(s.point, s.fitness);
  return sys;
}

}  // namespace ntbea
