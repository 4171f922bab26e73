#include "crdsa/decoder.hpp"

#include "crdsa/error.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace crdsa {

namespace {

void erase_one(std::vector<PacketId> &v, PacketId p) {
  auto it = std::find(v.begin(), v.end(), p);
  if (it != v.end()) {
    *it = v.back();
    v.pop_back();
  }
}

void sort_unique(std::vector<PacketId> &v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

} // namespace

// --- SlotGrid ---------------------------------------------------------------

SlotGrid::SlotGrid(SlotIndex first_slot, SlotIndex n_slots) { reset(first_slot, n_slots); }

void SlotGrid::reset(SlotIndex first_slot, SlotIndex n_slots) {
  if (n_slots < 0)
    throw domain_error("slot grid size must be >= 0");
  first_ = first_slot;
  slots_.resize(static_cast<std::size_t>(n_slots));
  for (auto &s : slots_)
    s.clear();
  replicas_.clear();
  order_.clear();
}

void SlotGrid::add(const ReplicaPlacement &placement) {
  if (placement.slots.empty())
    throw domain_error("placement without slots");
  for (SlotIndex s : placement.slots)
    if (!in_range(s))
      throw domain_error("slot " + std::to_string(s) + " outside grid");
  auto [it, inserted] = replicas_.try_emplace(placement.packet_id, placement.slots);
  if (!inserted)
    throw domain_error("packet " + std::to_string(placement.packet_id) + " already in grid");
  auto &reps = it->second;
  std::sort(reps.begin(), reps.end());
  if (std::adjacent_find(reps.begin(), reps.end()) != reps.end()) {
    replicas_.erase(it);
    throw domain_error("packet " + std::to_string(placement.packet_id) +
                       " has two replicas in one slot");
  }
  for (SlotIndex s : reps)
    at(s).push_back(placement.packet_id);
  order_.push_back(placement.packet_id);
}

void SlotGrid::remove_packet(PacketId packet) {
  auto it = replicas_.find(packet);
  if (it == replicas_.end())
    return;
  for (SlotIndex s : it->second)
    erase_one(at(s), packet);
}

const std::vector<PacketId> &SlotGrid::occupants(SlotIndex slot) const {
  if (!in_range(slot))
    throw domain_error("slot " + std::to_string(slot) + " outside grid");
  return slots_[static_cast<std::size_t>(slot - first_)];
}

const std::vector<SlotIndex> &SlotGrid::replicas(PacketId packet) const {
  auto it = replicas_.find(packet);
  if (it == replicas_.end())
    throw domain_error("unknown packet " + std::to_string(packet));
  return it->second;
}

std::size_t SlotGrid::burst_count() const noexcept {
  std::size_t n = 0;
  for (const auto &s : slots_)
    n += s.size();
  return n;
}

// --- frame decoding ---------------------------------------------------------

PeelOutcome peel(SlotGrid &grid, int max_iterations) {
  if (max_iterations < 1)
    throw domain_error("I_max must be >= 1");

  PeelOutcome out;
  std::vector<SlotIndex> frontier;
  for (SlotIndex s = grid.first_slot(); s < grid.first_slot() + grid.size(); ++s)
    if (grid.occupants(s).size() == 1)
      frontier.push_back(s);

  std::vector<PacketId> wave;
  while (!frontier.empty() && out.iterations < max_iterations) {
    wave.clear();
    for (SlotIndex s : frontier) {
      const auto &occ = grid.occupants(s);
      if (occ.size() == 1)
        wave.push_back(occ.front());
    }
    frontier.clear();
    sort_unique(wave);
    if (wave.empty())
      break;
    ++out.iterations;

    for (PacketId p : wave) {
      grid.remove_packet(p);
      for (SlotIndex r : grid.replicas(p))
        if (grid.occupants(r).size() == 1)
          frontier.push_back(r);
    }
    out.decoded.insert(out.decoded.end(), wave.begin(), wave.end());
  }
  std::sort(out.decoded.begin(), out.decoded.end());
  return out;
}

FrameOutcome fb_decode(SlotGrid &frame, int max_iterations) {
  PeelOutcome peeled = peel(frame, max_iterations);
  FrameOutcome out;
  out.iterations = peeled.iterations;
  out.decoded = std::move(peeled.decoded);
  for (PacketId p : frame.packets())
    if (!std::binary_search(out.decoded.begin(), out.decoded.end(), p))
      out.lost.push_back(p);
  std::sort(out.lost.begin(), out.lost.end());
  return out;
}

// --- oracle -----------------------------------------------------------------

std::vector<PacketId> oracle_peel(const SlotGrid &grid, std::span<const SlotIndex> scan_order) {
  std::map<SlotIndex, std::set<PacketId>> slots;
  for (SlotIndex s = grid.first_slot(); s < grid.first_slot() + grid.size(); ++s) {
    const auto &occ = grid.occupants(s);
    slots[s] = std::set<PacketId>(occ.begin(), occ.end());
  }
  std::vector<SlotIndex> order(scan_order.begin(), scan_order.end());
  if (order.empty())
    for (const auto &kv : slots)
      order.push_back(kv.first);

  std::vector<PacketId> decoded;
  bool changed = true;
  while (changed) {
    changed = false;
    for (SlotIndex s : order) {
      auto it = slots.find(s);
      if (it == slots.end() || it->second.size() != 1)
        continue;
      PacketId p = *it->second.begin();
      decoded.push_back(p);
      for (auto &kv : slots)
        kv.second.erase(p);
      changed = true;
      break;
    }
  }
  std::sort(decoded.begin(), decoded.end());
  return decoded;
}

// --- sliding window ---------------------------------------------------------

SlidingWindowDecoder::SlidingWindowDecoder(int window, int buffer_capacity, int max_iterations)
    : window_(window), capacity_(buffer_capacity), max_iterations_(max_iterations) {
  if (window < 1)
    throw config_error("window must be >= 1");
  if (buffer_capacity < window)
    throw config_error("buffer capacity " + std::to_string(buffer_capacity) +
                       " is smaller than the window " + std::to_string(window));
  if (max_iterations < 1)
    throw config_error("I_max must be >= 1");
  // one spare entry: the buffer holds capacity + 1 slots between append and eviction
  ring_.resize(static_cast<std::size_t>(buffer_capacity) + 1);
}

std::size_t SlidingWindowDecoder::buffered_bursts() const noexcept {
  std::size_t n = 0;
  for (const auto &s : ring_)
    n += s.size();
  return n;
}

std::vector<DecoderEvent> SlidingWindowDecoder::ingest(SlotIndex slot,
                                                       std::span<const Burst> bursts) {
  if (started_ && slot <= newest_)
    throw protocol_error("slot " + std::to_string(slot) + " ingested after slot " +
                         std::to_string(newest_));
  if (slot < 0)
    throw protocol_error("negative slot index");

  std::vector<DecoderEvent> events;
  if (started_)
    for (SlotIndex gap = newest_ + 1; gap < slot; ++gap)
      ingest_one(gap, {}, events);
  ingest_one(slot, bursts, events);
  return events;
}

void SlidingWindowDecoder::ingest_one(SlotIndex slot, std::span<const Burst> bursts,
                                      std::vector<DecoderEvent> &events) {
  if (!started_) {
    started_ = true;
    oldest_ = slot;
  }
  newest_ = slot;
  auto &occ = slot_at(slot);
  occ.clear();

  for (const Burst &b : bursts) {
    auto it = packets_.find(b.packet);
    if (it == packets_.end()) {
      if (b.replicas.empty() || !std::is_sorted(b.replicas.begin(), b.replicas.end()) ||
          !std::binary_search(b.replicas.begin(), b.replicas.end(), slot))
        throw protocol_error("burst of packet " + std::to_string(b.packet) +
                             " does not list slot " + std::to_string(slot));
      it = packets_.emplace(b.packet, Entry{{b.replicas.begin(), b.replicas.end()}, false}).first;
      ++pending_count_;
    }
    if (it->second.decoded) {
      // replica of a packet already recovered: cancel on arrival
      if (it->second.replicas.back() <= slot)
        packets_.erase(it);
      continue;
    }
    if (std::find(occ.begin(), occ.end(), b.packet) != occ.end())
      throw protocol_error("packet " + std::to_string(b.packet) + " appears twice in slot " +
                           std::to_string(slot));
    occ.push_back(b.packet);
  }
  if (occ.size() == 1)
    frontier_.push_back(slot);

  run_iterations(events);

  while (newest_ - oldest_ + 1 > capacity_)
    evict_oldest(events);
}

void SlidingWindowDecoder::run_iterations(std::vector<DecoderEvent> &events) {
  int iteration = 0;
  while (!frontier_.empty() && iteration < max_iterations_) {
    scratch_.clear();
    for (SlotIndex s : frontier_)
      if (buffered(s)) {
        const auto &occ = slot_at(s);
        if (occ.size() == 1)
          scratch_.push_back(occ.front());
      }
    frontier_.clear();
    sort_unique(scratch_);
    if (scratch_.empty())
      break;
    ++iteration;

    for (PacketId p : scratch_) {
      auto it = packets_.find(p);
      Entry &e = it->second;
      e.decoded = true;
      ++decoded_count_;
      --pending_count_;
      events.push_back({newest_, p, EventKind::decoded, iteration});
      for (SlotIndex r : e.replicas) {
        if (!buffered(r))
          continue;
        auto &occ = slot_at(r);
        erase_one(occ, p);
        if (occ.size() == 1)
          frontier_.push_back(r);
      }
      if (e.replicas.back() <= newest_)
        packets_.erase(it);
    }
  }
  peak_iterations_ = std::max(peak_iterations_, iteration);
}

void SlidingWindowDecoder::evict_oldest(std::vector<DecoderEvent> &events) {
  auto &occ = slot_at(oldest_);
  for (PacketId p : occ) {
    auto it = packets_.find(p);
    if (it->second.replicas.back() == oldest_) {
      events.push_back({newest_, p, EventKind::lost, 0});
      ++lost_count_;
      --pending_count_;
      packets_.erase(it);
    }
  }
  occ.clear();
  ++oldest_;
}

} // namespace crdsa
