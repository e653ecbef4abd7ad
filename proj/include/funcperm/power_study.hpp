#pragma once

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "funcperm/csv.hpp"
#include "funcperm/depth_rank_test.hpp"
#include "funcperm/error.hpp"
#include "funcperm/gbm.hpp"
#include "funcperm/hk_test.hpp"
#include "funcperm/knn_test.hpp"
#include "funcperm/meta_test.hpp"
#include "funcperm/random.hpp"
#include "funcperm/test_result.hpp"

namespace funcperm {

enum class Method { Wilcoxon, MA1, MA2, Schilling, HK };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::Wilcoxon: return "wilcoxon";
    case Method::MA1: return "ma1";
    case Method::MA2: return "ma2";
    case Method::Schilling: return "schilling";
    case Method::HK: return "hk";
  }
  return "?";
}

inline Method parse_method(const std::string& name) {
  std::string s;
  for (char c : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s == "wilcoxon") return Method::Wilcoxon;
  if (s == "ma1") return Method::MA1;
  if (s == "ma2") return Method::MA2;
  if (s == "schilling" || s == "knn") return Method::Schilling;
  if (s == "hk") return Method::HK;
  throw ConfigError("unknown method '" + name + "'", "method");
}

/// One column of a power study: a method and its settings.
struct TestSpec {
  std::string name;
  Method method = Method::Wilcoxon;
  std::size_t k = 10;
  std::size_t components = 4;
  std::size_t B = 1000;
};

/// Runs one configured test on a pooled sample. Permutation streams come from
/// `seed`, tie-breaking from `tie_seed`.
inline TestResult run_test(const TestSpec& spec, const PooledSample& pooled, std::uint64_t seed,
                           std::uint64_t tie_seed, unsigned threads = 1) {
  PermutationConfig config;
  config.B = spec.B;
  config.seed = seed;
  config.threads = threads;
  const auto start = std::chrono::steady_clock::now();
  TestResult out;
  switch (spec.method) {
    case Method::Wilcoxon: out = wilcoxon_test(pooled, tie_seed); break;
    case Method::MA1: out = ma1_test(pooled, config, tie_seed); break;
    case Method::MA2: out = ma2_test(pooled, config, tie_seed); break;
    case Method::Schilling:
      out = to_test_result(schilling_test(pooled, spec.k, config, tie_seed), pooled.m(), pooled.n());
      break;
    case Method::HK: out = hk_test(pooled, spec.components); break;
  }
  out.duration_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

struct Scenario {
  std::string name;
  GbmParams params;
};

struct PowerStudyConfig {
  GbmParams reference;
  std::vector<Scenario> alternatives;
  std::size_t m = 60;
  std::size_t n = 50;
  std::vector<TestSpec> roster;
  std::size_t replications = 100;
  double alpha = 0.05;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 0;

  void validate() const {
    reference.validate();
    if (m < 2) throw ConfigError("m must be >= 2", "study.m");
    if (n < 2) throw ConfigError("n must be >= 2", "study.n");
    if (replications < 1) throw ConfigError("replications must be >= 1", "study.replications");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)", "study.alpha");
    if (alternatives.empty()) throw ConfigError("no alternatives configured", "alternative");
    if (roster.empty()) throw ConfigError("no tests configured", "test");
    for (const auto& a : alternatives) {
      a.params.validate();
      if (a.params.t_max != reference.t_max || a.params.grid_points != reference.grid_points)
        throw ConfigError("alternative '" + a.name + "' must share the reference grid", "alternative " + a.name);
    }
    for (const auto& t : roster)
      if (t.B < 1) throw ConfigError("B must be >= 1", "test " + t.name + ".B");
  }
};

/// Rejection counts per (alternative, test); rates are rejections / R.
struct PowerTable {
  std::vector<std::string> rows;
  std::vector<std::string> columns;
  std::size_t replications = 0;
  double alpha = 0.05;
  std::vector<std::size_t> rejections;   // rows x columns
  std::vector<std::size_t> failures;     // rows x columns
  std::vector<double> pvalues;           // rows x replications x columns, NaN on failure
  std::vector<std::string> failure_messages;

  double rate(std::size_t row, std::size_t col) const {
    return static_cast<double>(rejections[row * columns.size() + col]) / static_cast<double>(replications);
  }
  double rate(const std::string& row, const std::string& col) const {
    return rate(index_of(rows, row), index_of(columns, col));
  }
  double pvalue(std::size_t row, std::size_t rep, std::size_t col) const {
    return pvalues[(row * replications + rep) * columns.size() + col];
  }

 private:
  static std::size_t index_of(const std::vector<std::string>& v, const std::string& key) {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] == key) return i;
    throw DomainError("no power table entry named '" + key + "'");
  }
};

/// Seed streams of one replication. X samples are shared by all alternatives
/// of a replication; every (alternative, test) cell has its own stream so that
/// adding a test or an alternative leaves the other cells unchanged.
struct ReplicationSeeds {
  static std::uint64_t base(std::uint64_t master, std::size_t rep) { return mix_seed(master, rep); }
  static std::uint64_t x_sample(std::uint64_t master, std::size_t rep) {
    return mix_seed_tag(base(master, rep), "sample:X");
  }
  static std::uint64_t y_sample(std::uint64_t master, std::size_t rep, const std::string& alt) {
    return mix_seed_tag(base(master, rep), "sample:Y:" + alt);
  }
  static std::uint64_t test(std::uint64_t master, std::size_t rep, const std::string& alt, const std::string& test) {
    return mix_seed_tag(base(master, rep), "test:" + alt + ":" + test);
  }
  static std::uint64_t tie(std::uint64_t test_seed) { return mix_seed_tag(test_seed, "tie"); }
};

using ProgressCallback = std::function<void(std::size_t done, std::size_t total)>;

/// Monte-Carlo power study: per replication, simulate X (size m) from the
/// reference and Y (size n) from each alternative, run every test, and count
/// p <= alpha as a rejection. A failing test is recorded in its cell and
/// counted as a non-rejection. Output is independent of the thread count.
inline PowerTable power_study(const PowerStudyConfig& config, const ProgressCallback& progress = {}) {
  config.validate();
  const std::size_t A = config.alternatives.size();
  const std::size_t T = config.roster.size();
  const std::size_t R = config.replications;

  PowerTable table;
  for (const auto& a : config.alternatives) table.rows.push_back(a.name);
  for (const auto& t : config.roster) table.columns.push_back(t.name);
  table.replications = R;
  table.alpha = config.alpha;
  table.pvalues.assign(A * R * T, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::string> errors(A * R * T);

  std::mutex progress_mutex;
  std::size_t done = 0;
  parallel_for(A * R, config.threads, [&](std::size_t cell) {
    const std::size_t a = cell / R, rep = cell % R;
    const auto& alt = config.alternatives[a];
    const auto xs = simulate_gbm(config.reference, config.m, ReplicationSeeds::x_sample(config.seed, rep));
    const auto ys = simulate_gbm(alt.params, config.n, ReplicationSeeds::y_sample(config.seed, rep, alt.name));
    const auto pooled = PooledSample::pool(xs, ys);
    for (std::size_t t = 0; t < T; ++t) {
      const auto& spec = config.roster[t];
      const auto seed = ReplicationSeeds::test(config.seed, rep, alt.name, spec.name);
      const std::size_t slot = (a * R + rep) * T + t;
      try {
        table.pvalues[slot] = run_test(spec, pooled, seed, ReplicationSeeds::tie(seed)).p_value;
      } catch (const std::exception& e) {
        errors[slot] = e.what();
      }
    }
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(++done, A * R);
    }
  });

  table.rejections.assign(A * T, 0);
  table.failures.assign(A * T, 0);
  for (std::size_t a = 0; a < A; ++a)
    for (std::size_t rep = 0; rep < R; ++rep)
      for (std::size_t t = 0; t < T; ++t) {
        const std::size_t slot = (a * R + rep) * T + t;
        if (!errors[slot].empty()) {
          ++table.failures[a * T + t];
          table.failure_messages.push_back(table.rows[a] + "/" + table.columns[t] + " replication " +
                                           std::to_string(rep) + ": " + errors[slot]);
        } else if (table.pvalues[slot] <= config.alpha) {
          ++table.rejections[a * T + t];
        }
      }
  return table;
}

/// CSV: header "sample,<tests...>", one row per alternative, rates in [0, 1].
inline void write_power_csv(std::ostream& out, const PowerTable& table) {
  std::string line = "sample";
  for (const auto& c : table.columns) line += "," + c;
  out << line << '\n';
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    line = table.rows[r];
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      line.push_back(',');
      detail::append_number(line, table.rate(r, c));
    }
    out << line << '\n';
  }
}

/// Aligned text table of rejection percentages, failures listed below it.
inline void write_power_text(std::ostream& out, const PowerTable& table) {
  std::size_t first = 6;
  for (const auto& r : table.rows) first = std::max(first, r.size());
  std::vector<std::size_t> widths;
  for (const auto& c : table.columns) widths.push_back(std::max<std::size_t>(c.size(), 5));
  std::ostringstream s;
  s << "Empirical power (%), alpha = " << table.alpha << ", R = " << table.replications << '\n';
  s << std::left << std::setw(static_cast<int>(first)) << "Sample";
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    s << "  " << std::right << std::setw(static_cast<int>(widths[c])) << table.columns[c];
  s << '\n';
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    s << std::left << std::setw(static_cast<int>(first)) << table.rows[r];
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      std::ostringstream cell;
      cell << std::fixed << std::setprecision(table.replications > 100 ? 1 : 0) << 100.0 * table.rate(r, c);
      if (table.failures[r * table.columns.size() + c] > 0) cell << '*';
      s << "  " << std::right << std::setw(static_cast<int>(widths[c])) << cell.str();
    }
    s << '\n';
  }
  if (!table.failure_messages.empty()) {
    s << "\n* cells with failed replications (counted as non-rejections):\n";
    for (const auto& msg : table.failure_messages) s << "  " << msg << '\n';
  }
  out << s.str();
}

}  // namespace funcperm
