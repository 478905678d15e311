#pragma once

// Batches of pipeline runs over random base sets, written as CSV.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cgrowth/error.hpp"
#include "cgrowth/group.hpp"
#include "cgrowth/growth.hpp"
#include "cgrowth/pipeline.hpp"

namespace cgrowth {

struct ExperimentConfig {
  Family family = Family::PSL;
  int n = 2;
  std::uint64_t q = 11;
  std::vector<std::size_t> sizes{2, 4, 8, 16};
  int trials = 1;
  std::uint64_t seed = 1;
  std::uint64_t cap = kDefaultGroupCap;
  std::string out;       // CSV path, empty for none
  std::string cert_dir;  // one certificate per row when set
  bool timing = false;   // runtime_ms is 0 otherwise, keeping reruns identical
  GrowthParams params;

  void validate() const {
    params.validate();
    if (sizes.empty()) fail(Errc::InvalidArgument, "no set sizes given");
    for (auto s : sizes)
      if (s < 2) fail(Errc::InvalidArgument, "set sizes must be >= 2");
    if (trials < 1) fail(Errc::InvalidArgument, "trials must be >= 1");
  }
};

struct ExperimentRow {
  Family family = Family::PSL;
  int n = 0;
  std::uint64_t q = 0;
  std::size_t order = 0;
  int r = 0;
  std::size_t set_size = 0;
  std::uint64_t seed = 0;
  std::size_t N = 0;  // 0 marks a failed row
  BoundRatios ratios;
  std::string stage_path;
  long long runtime_ms = 0;
  bool ok = false;
};

inline constexpr char const* kCsvHeader =
    "family,n,q,order,r,set_size,seed,N,conjecture_ratio,theorem_ratio,pyber_ratio,stage_path,runtime_ms";

inline std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string csv_line(ExperimentRow const& row) {
  std::ostringstream os;
  os << family_name(row.family) << ',' << row.n << ',' << row.q << ',' << row.order << ',' << row.r << ','
     << row.set_size << ',' << row.seed << ',' << row.N << ',' << fmt9(row.ratios.conjecture) << ','
     << fmt9(row.ratios.theorem) << ',' << fmt9(row.ratios.pyber) << ',' << row.stage_path << ',' << row.runtime_ms;
  return os.str();
}

inline std::string csv_text(std::vector<ExperimentRow> const& rows) {
  std::string s = std::string(kCsvHeader) + "\n";
  for (auto const& r : rows) s += csv_line(r) + "\n";
  return s;
}

/// base x 10^6 + size x 10^3 + trial
inline std::uint64_t row_seed(std::uint64_t base, std::size_t size, int trial) {
  return base * 1'000'000 + static_cast<std::uint64_t>(size) * 1'000 + static_cast<std::uint64_t>(trial);
}

/// Stages visited, e.g. "1-2-3-4-5-6:xcldelta+close".
inline std::string stage_path(PipelineReport const& rep) {
  if (rep.base_size == rep.order) return "0";
  std::size_t const last = rep.closed_at_stage == 0 || rep.closed_at_stage > 6 ? 6 : rep.closed_at_stage;
  std::string s;
  for (std::size_t i = 1; i <= last; ++i) {
    if (i > 1) s += '-';
    s += std::to_string(i);
  }
  if (last == 6) s += ":" + rep.stage6_branch;
  if (rep.close_factors > 0) s += "+close";
  return s;
}

struct ExperimentSummary {
  std::size_t rows = 0;
  std::size_t failures = 0;
  std::size_t max_N = 0;
  double mean_conjecture = 0;
  double max_conjecture = 0;
};

inline ExperimentSummary summarize(std::vector<ExperimentRow> const& rows) {
  ExperimentSummary s;
  s.rows = rows.size();
  std::size_t good = 0;
  for (auto const& r : rows) {
    if (!r.ok) {
      ++s.failures;
      continue;
    }
    ++good;
    s.max_N = std::max(s.max_N, r.N);
    s.mean_conjecture += r.ratios.conjecture;
    s.max_conjecture = std::max(s.max_conjecture, r.ratios.conjecture);
  }
  if (good) s.mean_conjecture /= static_cast<double>(good);
  return s;
}

/// One row per (size, trial), in that order. A row that fails keeps N = 0
/// and names the error in stage_path; the batch continues.
inline std::vector<ExperimentRow> experiment_run(ExperimentConfig const& cfg,
                                                 std::function<void(ExperimentRow const&)> const& on_row = {}) {
  cfg.validate();
  auto G = Group::make(cfg.family, cfg.n, cfg.q, cfg.cap);
  G->enumerate();
  std::vector<ExperimentRow> rows;
  for (auto size : cfg.sizes) {
    for (int t = 0; t < cfg.trials; ++t) {
      ExperimentRow row;
      row.family = cfg.family;
      row.n = cfg.n;
      row.q = cfg.q;
      row.order = G->order();
      row.r = G->rank();
      row.set_size = size;
      row.seed = row_seed(cfg.seed, size, t);
      auto const start = std::chrono::steady_clock::now();
      try {
        auto A = random_subset(*G, size, row.seed);
        auto res = pipeline_run(A, cfg.params, row.seed);
        auto v = certificate_check(res.certificate, *G);
        if (!v.pass) {
          row.stage_path = "FAIL:" + std::string(errc_name(*v.error));
        } else {
          row.N = res.report.N;
          row.ratios = res.certificate.bounds;
          row.stage_path = stage_path(res.report);
          row.ok = true;
        }
        if (!cfg.cert_dir.empty()) {
          std::ofstream f(cfg.cert_dir + "/cert_" + std::to_string(size) + "_" + std::to_string(t) + ".json");
          f << res.certificate.dump();
        }
      } catch (Error const& e) {
        row.stage_path = "FAIL:" + std::string(errc_name(e.code()));
      }
      if (cfg.timing)
        row.runtime_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
      if (on_row) on_row(row);
      rows.push_back(row);
    }
  }
  return rows;
}

/// Flat "key = value" lines; '#' starts a comment.
inline std::map<std::string, std::string> read_config(std::string const& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::InvalidArgument, "cannot read config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    auto const b = s.find_first_not_of(" \t\r");
    auto const e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) fail(Errc::InvalidArgument, path + ":" + std::to_string(lineno) + ": expected key = value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

inline std::vector<std::size_t> parse_size_list(std::string const& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stoul(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (std::exception const&) {
      fail(Errc::InvalidArgument, "bad size '" + tok + "'");
    }
  }
  return out;
}

}  // namespace cgrowth
