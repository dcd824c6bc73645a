#include "mubforge/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mubforge::search {

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
  constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
           static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
           static_cast<std::uint32_t>(p0)};
    key[0] += w0;
    key[1] += w1;
  }
  return ctr;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial) {
  // splitmix64 finalizer on master + (trial+1) * golden gamma
  std::uint64_t z = master_seed + (trial + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

ParameterPoint random_point(const ConstellationSpec& spec, std::uint64_t seed) {
  const int p = constellation::parameter_count(spec);
  ParameterPoint out{spec, std::vector<double>(p)};
  const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed),
                                         static_cast<std::uint32_t>(seed >> 32)};
  for (int i = 0; i < p; i += 2) {
    const std::uint64_t block = static_cast<std::uint64_t>(i) / 2;
    const auto words = philox4x32({static_cast<std::uint32_t>(block),
                                   static_cast<std::uint32_t>(block >> 32), 0u, 0u},
                                  key);
    for (int half = 0; half < 2 && i + half < p; ++half) {
      const std::uint64_t wide =
          (static_cast<std::uint64_t>(words[2 * half]) << 32) | words[2 * half + 1];
      const double unit = static_cast<double>(wide >> 11) * 0x1.0p-53;
      out.angles[i + half] = unit * 2.0 * std::numbers::pi;
    }
  }
  return out;
}

nlohmann::ordered_json record_to_json(const TrialRecord& r) {
  nlohmann::ordered_json j;
  j["trial"] = r.trial;
  j["seed"] = std::to_string(r.seed);
  j["final_f"] = r.final_f;
  j["iters"] = r.iters;
  j["term"] = to_string(r.term);
  j["ms"] = r.ms;
  return j;
}

TrialRecord record_from_json(const nlohmann::json& j) {
  TrialRecord r;
  r.trial = j.at("trial").get<std::int64_t>();
  r.seed = std::stoull(j.at("seed").get<std::string>());
  r.final_f = j.at("final_f").get<double>();
  r.iters = j.at("iters").get<int>();
  r.term = termination_from_string(j.at("term").get<std::string>());
  r.ms = j.at("ms").get<double>();
  return r;
}

void Histogram::add(double f) {
  if (!(f >= 1e-20)) {  // includes f == 0 and NaN
    ++underflow;
    return;
  }
  const int decade = static_cast<int>(std::floor(std::log10(f)));
  if (decade >= kLog10Hi) {
    ++overflow;
    return;
  }
  // floor(log10) can land one decade low for values on a bin edge
  ++counts[std::max(decade, kLog10Lo) - kLog10Lo];
}

CampaignReport aggregate(const ConstellationSpec& spec, double threshold,
                         const std::vector<TrialRecord>& records) {
  CampaignReport out;
  out.spec = spec;
  out.counts = constellation::classify(spec);
  out.threshold = threshold;
  out.trials = static_cast<std::int64_t>(records.size());
  out.min_f = std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    if (r.final_f < threshold) ++out.successes;
    out.min_f = std::min(out.min_f, r.final_f);
    out.histogram.add(r.final_f);
  }
  out.success_rate = out.trials ? 100.0 * static_cast<double>(out.successes) / out.trials : 0.0;
  return out;
}

nlohmann::ordered_json report_to_json(const CampaignReport& r) {
  nlohmann::ordered_json j;
  j["spec"] = constellation::format_spec(r.spec);
  j["display"] = constellation::display_spec(r.spec);
  j["p"] = r.counts.parameters;
  j["c"] = r.counts.constraints;
  j["s"] = r.counts.free_states;
  j["total_states"] = r.counts.total_states;
  j["kind"] = to_string(r.counts.kind);
  j["threshold"] = r.threshold;
  j["trials"] = r.trials;
  j["successes"] = r.successes;
  j["success_rate"] = r.success_rate;
  j["min_f"] = r.min_f;
  nlohmann::ordered_json h;
  h["log10_lo"] = Histogram::kLog10Lo;
  h["log10_hi"] = Histogram::kLog10Hi;
  h["underflow"] = r.histogram.underflow;
  h["counts"] = r.histogram.counts;
  h["overflow"] = r.histogram.overflow;
  j["histogram"] = std::move(h);
  return j;
}

std::vector<TrialRecord> read_records(const std::string& path) {
  std::vector<TrialRecord> out;
  std::ifstream f(path);
  if (!f) return out;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    try {
      out.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception&) {
      break;  // torn tail line from an interrupted run
    }
  }
  return out;
}

std::uint64_t default_worker_count() {
  if (const char* env = std::getenv("MUBFORGE_WORKERS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return static_cast<std::uint64_t>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

CampaignReport run_campaign(const CampaignConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("run_campaign: trials must be >= 1");
  if (!cfg.spec.restricted()) throw std::invalid_argument("run_campaign: spec must be restricted");

  std::vector<TrialRecord> records;
  std::set<std::int64_t> done;
  if (!cfg.records_path.empty()) {
    records = read_records(cfg.records_path);
    std::erase_if(records, [&](const TrialRecord& r) { return r.trial >= cfg.trials; });
    for (const auto& r : records) done.insert(r.trial);
  }

  std::ofstream sink;
  std::mutex sink_mutex;
  if (!cfg.records_path.empty()) {
    // rewrite the retained records so a torn tail line from an interrupted
    // run cannot corrupt the stream
    sink.open(cfg.records_path, std::ios::trunc);
    if (!sink) throw std::runtime_error("run_campaign: cannot open " + cfg.records_path);
    for (const auto& r : records) sink << record_to_json(r).dump() << "\n";
    sink.flush();
  }

  std::atomic<std::int64_t> next{0};
  std::mutex records_mutex;
  const int workers = std::max(cfg.workers, 1);

  auto worker = [&] {
    while (true) {
      const std::int64_t t = next.fetch_add(1);
      if (t >= cfg.trials) break;
      if (done.contains(t)) continue;
      const std::uint64_t seed = trial_seed(cfg.master_seed, static_cast<std::uint64_t>(t));
      const auto t0 = std::chrono::steady_clock::now();
      const MinimizeResult res =
          optimizer::minimize(random_point(cfg.spec, seed), cfg.lm, cfg.variant);
      const double ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      const TrialRecord rec{t, seed, res.final_f, res.iterations, res.termination, ms};
      if (sink.is_open()) {
        const std::string line = record_to_json(rec).dump();
        std::lock_guard lock(sink_mutex);
        sink << line << "\n";
        sink.flush();
      }
      std::lock_guard lock(records_mutex);
      records.push_back(rec);
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::sort(records.begin(), records.end(),
            [](const TrialRecord& a, const TrialRecord& b) { return a.trial < b.trial; });
  return aggregate(cfg.spec, cfg.lm.success_threshold, records);
}

std::vector<CampaignReport> sweep(const SweepConfig& cfg) {
  const auto specs = constellation::enumerate_subspecs(cfg.top);
  std::vector<CampaignReport> out;
  out.reserve(specs.size());
  for (size_t i = 0; i < specs.size(); ++i) {
    CampaignConfig sub;
    sub.spec = specs[i];
    sub.trials = cfg.trials;
    sub.master_seed = trial_seed(cfg.master_seed, 0x5EEDull * (i + 1));
    sub.lm = cfg.lm;
    sub.variant = cfg.variant;
    sub.workers = cfg.workers;
    if (!cfg.out_dir.empty()) {
      std::string name = constellation::format_spec(specs[i]);
      std::replace(name.begin(), name.end(), '=', '_');
      std::replace(name.begin(), name.end(), ':', '_');
      std::replace(name.begin(), name.end(), ',', '-');
      sub.records_path = (std::filesystem::path(cfg.out_dir) / ("records_" + name + ".ndjson")).string();
    }
    out.push_back(run_campaign(sub));
  }
  return out;
}

std::string sweep_table_csv(const std::vector<CampaignReport>& reports) {
  std::vector<const CampaignReport*> rows;
  rows.reserve(reports.size());
  for (const auto& r : reports) rows.push_back(&r);
  const auto cell = [](const ConstellationSpec& s, size_t i) {
    return i < s.counts.size() ? s.counts[i] : 0;
  };
  std::sort(rows.begin(), rows.end(), [&](const CampaignReport* a, const CampaignReport* b) {
    for (size_t i = 1; i <= 3; ++i)
      if (cell(a->spec, i) != cell(b->spec, i)) return cell(a->spec, i) < cell(b->spec, i);
    return false;
  });
  std::ostringstream csv;
  csv << "x,y,z,p,kind,rate,min_f\n";
  for (const CampaignReport* r : rows) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%s,%.4f,%.9e\n", cell(r->spec, 1),
                  cell(r->spec, 2), cell(r->spec, 3), r->counts.parameters,
                  to_string(r->counts.kind), r->success_rate, r->min_f);
    csv << buf;
  }
  return csv.str();
}

LatticeTally lattice_tally(const std::vector<CampaignReport>& reports,
                           const ConstellationSpec& top) {
  LatticeTally out;
  out.top = top;
  for (const auto& r : reports) {
    TallyEntry e;
    e.spec = r.spec;
    e.direct = r.successes;
    for (const auto& other : reports) {
      if (other.spec == r.spec) continue;
      if (constellation::leq(r.spec, other.spec)) e.implied += other.successes;
    }
    out.entries.push_back(std::move(e));
    if (r.successes == 0 && constellation::leq(r.spec, top)) out.negative_for_top += r.trials;
  }
  return out;
}

nlohmann::ordered_json tally_to_json(const LatticeTally& tally) {
  nlohmann::ordered_json j;
  j["top"] = constellation::format_spec(tally.top);
  j["negative_for_top"] = tally.negative_for_top;
  auto entries = nlohmann::ordered_json::array();
  for (const auto& e : tally.entries) {
    nlohmann::ordered_json je;
    je["spec"] = constellation::format_spec(e.spec);
    je["direct"] = e.direct;
    je["implied"] = e.implied;
    entries.push_back(std::move(je));
  }
  j["entries"] = std::move(entries);
  return j;
}

Histogram records_histogram(const std::vector<TrialRecord>& records) {
  Histogram h;
  for (const auto& r : records) h.add(r.final_f);
  return h;
}

std::string histogram_csv(const Histogram& h) {
  std::ostringstream csv;
  csv << "log10_lo,log10_hi,count\n";
  csv << "-inf," << Histogram::kLog10Lo << "," << h.underflow << "\n";
  for (int i = 0; i < Histogram::kDecades; ++i)
    csv << (Histogram::kLog10Lo + i) << "," << (Histogram::kLog10Lo + i + 1) << ","
        << h.counts[i] << "\n";
  csv << Histogram::kLog10Hi << ",inf," << h.overflow << "\n";
  return csv.str();
}

}  // namespace mubforge::search
