#include "crdsa/engine.hpp"

#include "crdsa/error.hpp"
#include "crdsa/traffic.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace crdsa {

std::string scheme_name(Scheme scheme) {
  switch (scheme) {
  case Scheme::sa:
    return "SA";
  case Scheme::fb_crdsa:
    return "FB";
  case Scheme::sw_crdsa:
    return "SW";
  }
  return "?";
}

Scheme parse_scheme(std::string_view text) {
  std::string s;
  for (char c : text)
    s += c == '-' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "sa" || s == "aloha")
    return Scheme::sa;
  if (s == "fb" || s == "fb_crdsa" || s == "crdsa")
    return Scheme::fb_crdsa;
  if (s == "sw" || s == "sw_crdsa")
    return Scheme::sw_crdsa;
  throw config_error("unknown scheme '" + std::string(text) + "' (expected sa, fb or sw)");
}

void ExperimentConfig::validate() const {
  if (window < 1)
    throw config_error("window size must be >= 1");
  if (max_iterations < 1)
    throw config_error("I_max must be >= 1");
  if (memory_multiplier < 1)
    throw config_error("memory multiplier must be >= 1");
  if (effective_warmup() < 0)
    throw config_error("warm-up must be >= 0");
  if (total_slots <= effective_warmup())
    throw config_error("total slots (" + std::to_string(total_slots) +
                       ") must exceed warm-up slots (" + std::to_string(effective_warmup()) + ")");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw config_error("confidence must lie in (0, 1)");
  if (effective_distribution().max_degree() > window)
    throw config_error("degree " + std::to_string(effective_distribution().max_degree()) +
                       " does not fit in a window of " + std::to_string(window) + " slots");
  for (double g : loads)
    if (!(g >= 0.0) || !std::isfinite(g))
      throw config_error("invalid load G=" + std::to_string(g));
  for (double s : snr_db)
    if (!std::isfinite(s))
      throw config_error("invalid SNR");
}

DegreeDistribution ExperimentConfig::effective_distribution() const {
  return scheme == Scheme::sa ? make_regular(1) : distribution;
}

std::string ExperimentConfig::distribution_label() const {
  return distribution_id(effective_distribution());
}

// --- seeding ----------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

} // namespace

std::uint64_t point_seed(const ExperimentConfig &config, double load) {
  // G is quantized so that 0.1 + 3 * 0.05 and 0.25 share a seed
  const auto g_key = static_cast<std::uint64_t>(std::llround(load * 1e9));
  std::uint64_t h = splitmix64(config.seed);
  h = splitmix64(h ^ fnv1a(scheme_name(config.scheme)));
  h = splitmix64(h ^ fnv1a(config.distribution_label()));
  h = splitmix64(h ^ g_key);
  return h;
}

// --- single point -----------------------------------------------------------

namespace {

class StatsAccumulator {
public:
  StatsAccumulator(double load, std::int64_t warmup, std::int64_t total)
      : warmup_(warmup) {
    stats_.offered_load = load;
    stats_.measured_slots = total - warmup;
  }

  bool counted(SlotIndex ready) const { return ready >= warmup_; }

  void sent(SlotIndex ready) {
    if (counted(ready))
      ++stats_.packets_sent;
  }
  void decoded(SlotIndex ready, SlotIndex at) {
    if (!counted(ready))
      return;
    ++stats_.packets_decoded;
    delay_sum_ += static_cast<double>(at - ready);
  }
  void lost(SlotIndex ready) {
    if (counted(ready))
      ++stats_.packets_lost;
  }

  RunStats finish() {
    if (stats_.packets_sent != stats_.packets_decoded + stats_.packets_lost)
      throw std::logic_error("packet conservation violated: sent=" +
                             std::to_string(stats_.packets_sent) +
                             " decoded=" + std::to_string(stats_.packets_decoded) +
                             " lost=" + std::to_string(stats_.packets_lost));
    stats_.mean_delay_slots =
        stats_.packets_decoded > 0 ? delay_sum_ / static_cast<double>(stats_.packets_decoded) : 0.0;
    finalize(stats_);
    return stats_;
  }

private:
  std::int64_t warmup_;
  RunStats stats_;
  double delay_sum_ = 0.0;
};

struct LivePacket {
  ReplicaPlacement placement;
  SlotIndex ready;
  bool resolved = false;
};

PointResult run_sliding(const ExperimentConfig &config, const DegreeDistribution &dist,
                        double load, Rng &rng, const TraceSink &trace) {
  const int window = config.window;
  const std::int64_t total = config.total_slots;
  StatsAccumulator acc(load, config.effective_warmup(), total);
  ArrivalProcess arrivals(load);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SlidingWindowDecoder decoder(window, config.buffer_capacity(), config.max_iterations);

  const auto ring = static_cast<std::size_t>(window) + 1;
  std::vector<std::vector<PacketId>> channel(ring);
  std::unordered_map<PacketId, LivePacket> live;
  std::vector<Burst> bursts;
  PacketId next_id = 0;

  // drain: enough empty slots for every pending packet to leave the buffer
  const SlotIndex end = total + 1 + window + config.buffer_capacity();
  for (SlotIndex t = 0; t < end; ++t) {
    auto &incoming = channel[static_cast<std::size_t>(t) % ring];
    bursts.clear();
    for (PacketId id : incoming)
      bursts.push_back({id, live.at(id).placement.slots});

    for (const DecoderEvent &e : decoder.ingest(t, bursts)) {
      if (trace)
        trace(e);
      auto it = live.find(e.packet);
      LivePacket &p = it->second;
      p.resolved = true;
      if (e.kind == EventKind::decoded)
        acc.decoded(p.ready, e.slot);
      else
        acc.lost(p.ready);
      if (p.placement.last_slot() <= t)
        live.erase(it);
    }
    for (PacketId id : incoming) {
      auto it = live.find(id);
      if (it != live.end() && it->second.resolved && it->second.placement.last_slot() <= t)
        live.erase(it);
    }
    incoming.clear();

    if (t >= total)
      continue;
    const int n = arrivals.next(rng);
    for (int i = 0; i < n; ++i) {
      const int degree = dist.sample(unit(rng));
      const PacketId id = next_id++;
      ReplicaPlacement placement = place_sw(id, degree, t, window, rng);
      for (SlotIndex s : placement.slots)
        channel[static_cast<std::size_t>(s) % ring].push_back(id);
      live.emplace(id, LivePacket{std::move(placement), t, false});
      acc.sent(t);
    }
  }
  if (decoder.pending_count() != 0 || !live.empty())
    throw std::logic_error("sliding-window run ended with unresolved packets");

  PointResult out;
  out.stats = acc.finish();
  out.peak_iterations = decoder.peak_iterations();
  return out;
}

PointResult run_framed(const ExperimentConfig &config, const DegreeDistribution &dist,
                       double load, Rng &rng, const TraceSink &trace) {
  const int frame = config.window;
  const std::int64_t total = config.total_slots;
  StatsAccumulator acc(load, config.effective_warmup(), total);
  ArrivalProcess arrivals(load);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<SlotIndex> waiting;       // ready slots of packets queued for the next frame
  std::vector<SlotIndex> in_frame;      // ready slots of packets in the current frame
  SlotGrid grid;
  PacketId next_id = 0;
  int peak_iterations = 0;

  const std::int64_t arrival_frames = (total + frame - 1) / frame;
  for (std::int64_t k = 0; k <= arrival_frames; ++k) {
    const SlotIndex start = k * frame;
    grid.reset(start, frame);
    in_frame.swap(waiting);
    waiting.clear();

    const PacketId first_id = next_id;
    for (std::size_t i = 0; i < in_frame.size(); ++i) {
      const int degree = dist.sample(unit(rng));
      grid.add(place_fb(next_id++, degree, start, frame, rng));
    }
    const FrameOutcome outcome = fb_decode(grid, config.max_iterations);
    peak_iterations = std::max(peak_iterations, outcome.iterations);
    const SlotIndex frame_end = start + frame - 1;
    for (PacketId p : outcome.decoded) {
      const SlotIndex ready = in_frame[static_cast<std::size_t>(p - first_id)];
      acc.decoded(ready, frame_end);
      if (trace)
        trace({frame_end, p, EventKind::decoded, 0});
    }
    for (PacketId p : outcome.lost) {
      acc.lost(in_frame[static_cast<std::size_t>(p - first_id)]);
      if (trace)
        trace({frame_end, p, EventKind::lost, 0});
    }

    for (SlotIndex t = start; t < start + frame && t < total; ++t) {
      const int n = arrivals.next(rng);
      for (int i = 0; i < n; ++i) {
        waiting.push_back(t);
        acc.sent(t);
      }
    }
  }
  if (!waiting.empty())
    throw std::logic_error("framed run ended with queued packets");

  PointResult out;
  out.stats = acc.finish();
  out.peak_iterations = peak_iterations;
  return out;
}

} // namespace

PointResult run_point(const ExperimentConfig &config, double load, const TraceSink &trace) {
  config.validate();
  if (!(load >= 0.0) || !std::isfinite(load))
    throw config_error("invalid load G=" + std::to_string(load));

  const DegreeDistribution dist = config.effective_distribution();
  const std::uint64_t seed = point_seed(config, load);
  Rng rng(seed);

  PointResult out = config.scheme == Scheme::fb_crdsa
                        ? run_framed(config, dist, load, rng, trace)
                        : run_sliding(config, dist, load, rng, trace);
  out.seed = seed;
  if (out.stats.packets_sent > 0) {
    const auto [lo, hi] =
        wilson_interval(out.stats.packets_lost, out.stats.packets_sent, config.confidence);
    out.plr_ci_low = lo;
    out.plr_ci_high = hi;
  }
  return out;
}

// --- sweeps -----------------------------------------------------------------

std::vector<SweepRow> sweep(std::span<const ExperimentConfig> configs, unsigned threads,
                            const TraceFactory &trace) {
  struct Job {
    std::size_t config;
    std::size_t load;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    configs[c].validate();
    for (std::size_t g = 0; g < configs[c].loads.size(); ++g)
      jobs.push_back({c, g});
  }

  std::vector<PointResult> results(jobs.size());
  std::vector<std::exception_ptr> failures(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const auto &cfg = configs[jobs[j].config];
      try {
        const double load = cfg.loads[jobs[j].load];
        results[j] = trace ? run_point(cfg, load, trace(cfg, load)) : run_point(cfg, load);
      } catch (...) {
        failures[j] = std::current_exception();
      }
    }
  };

  if (trace)
    threads = 1;
  if (threads == 0)
    threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(jobs.size(), 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i)
      pool.emplace_back(worker);
  }

  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (!failures[j])
      continue;
    const auto &cfg = configs[jobs[j].config];
    const std::string where = " [scheme=" + scheme_name(cfg.scheme) +
                              " dist=" + cfg.distribution_label() +
                              " G=" + std::to_string(cfg.loads[jobs[j].load]) + "]";
    try {
      std::rethrow_exception(failures[j]);
    } catch (const Error &e) {
      throw Error(e.kind(), e.what() + where);
    } catch (const std::exception &e) {
      throw std::runtime_error(e.what() + where);
    }
  }

  std::vector<SweepRow> rows;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const auto &cfg = configs[jobs[j].config];
    const PointResult &r = results[j];
    const double mean = cfg.effective_distribution().mean_degree();
    const double load = cfg.loads[jobs[j].load];
    for (double snr : cfg.snr_db) {
      SweepRow row{cfg.scheme,
                   cfg.distribution_label(),
                   load,
                   snr,
                   cfg.total_slots,
                   r.stats,
                   r.plr_ci_low,
                   r.plr_ci_high,
                   mean,
                   mean * load,
                   normalized_efficiency(r.stats.throughput, load, mean, snr_db_to_linear(snr)),
                   r.seed};
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<SweepRow> sweep(const ExperimentConfig &config, unsigned threads) {
  return sweep(std::span<const ExperimentConfig>(&config, 1), threads);
}

} // namespace crdsa
