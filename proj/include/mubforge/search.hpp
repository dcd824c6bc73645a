#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "mubforge/optimizer.hpp"

namespace mubforge::search {

/// Counter-based generator behind every campaign: philox4x32-10 keyed by a
/// 64-bit per-trial seed, counter = index of the angle pair. Platform
/// independent and order independent across trials.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Per-trial key: splitmix64 mix of the campaign master seed and trial index.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial);

/// p angles i.i.d. uniform on [0, 2pi), deterministic per (spec, seed).
ParameterPoint random_point(const ConstellationSpec& spec, std::uint64_t seed);

struct TrialRecord {
  std::int64_t trial = 0;
  std::uint64_t seed = 0;
  double final_f = 0.0;
  int iters = 0;
  Termination term = Termination::MaxIter;
  double ms = 0.0;
};

nlohmann::ordered_json record_to_json(const TrialRecord& r);
TrialRecord record_from_json(const nlohmann::json& j);

/// Decade-binned counts of final objective values over [1e-20, 1e2], with
/// underflow/overflow bins at the ends.
struct Histogram {
  static constexpr int kLog10Lo = -20;
  static constexpr int kLog10Hi = 2;
  static constexpr int kDecades = kLog10Hi - kLog10Lo;

  std::int64_t underflow = 0;
  std::int64_t overflow = 0;
  std::array<std::int64_t, kDecades> counts{};

  void add(double f);
  bool operator==(const Histogram&) const = default;
};

struct CampaignConfig {
  ConstellationSpec spec;
  std::int64_t trials = 100;
  std::uint64_t master_seed = 0;
  LmConfig lm;
  ObjectiveVariant variant = ObjectiveVariant::AbsOverlap;
  int workers = 1;
  std::string records_path;  // when set: NDJSON sink, resumable across runs
};

struct CampaignReport {
  ConstellationSpec spec;
  SpecCounts counts;
  double threshold = 1e-7;
  std::int64_t trials = 0;
  std::int64_t successes = 0;
  double success_rate = 0.0;  // percent
  double min_f = 0.0;
  Histogram histogram;

  bool operator==(const CampaignReport&) const = default;
};

nlohmann::ordered_json report_to_json(const CampaignReport& r);

/// Pure fold of trial records into a report; independent of record order.
CampaignReport aggregate(const ConstellationSpec& spec, double threshold,
                         const std::vector<TrialRecord>& records);

/// Runs the configured trials (parallel up to cfg.workers; per-trial seeding
/// makes the report independent of the worker count), streaming records to
/// cfg.records_path when set. Trials already present in the sink are skipped,
/// so an interrupted campaign resumes where it stopped.
CampaignReport run_campaign(const CampaignConfig& cfg);

std::vector<TrialRecord> read_records(const std::string& path);
std::uint64_t default_worker_count();

struct SweepConfig {
  ConstellationSpec top;
  std::int64_t trials = 100;
  std::uint64_t master_seed = 0;
  LmConfig lm;
  ObjectiveVariant variant = ObjectiveVariant::AbsOverlap;
  int workers = 1;
  std::string out_dir;  // when set: per-spec record sinks land here
};

/// run_campaign over every subspec of cfg.top (exactly as many extra groups
/// as top), each with its own derived master seed.
std::vector<CampaignReport> sweep(const SweepConfig& cfg);

/// Success-rate table keyed like the sweep family: columns x,y,z (zero-padded
/// for specs with fewer extra groups), p, kind, rate, min_f.
std::string sweep_table_csv(const std::vector<CampaignReport>& reports);

struct TallyEntry {
  ConstellationSpec spec;
  std::int64_t direct = 0;   // successes of this spec's own campaign
  std::int64_t implied = 0;  // successes of campaigns for specs strictly containing it
};

struct LatticeTally {
  std::vector<TallyEntry> entries;
  // trials of all zero-success campaigns contained in the top spec
  std::int64_t negative_for_top = 0;
  ConstellationSpec top;
};

/// Lattice accounting: a found constellation confirms everything it
/// contains; zero-success campaigns below a top spec count against it.
LatticeTally lattice_tally(const std::vector<CampaignReport>& reports,
                           const ConstellationSpec& top);

nlohmann::ordered_json tally_to_json(const LatticeTally& tally);

/// Decade histogram of the final_f column of a record stream.
Histogram records_histogram(const std::vector<TrialRecord>& records);
std::string histogram_csv(const Histogram& h);

}  // namespace mubforge::search
