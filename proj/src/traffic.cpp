#include "crdsa/traffic.hpp"

#include "crdsa/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace crdsa {

namespace {

std::poisson_distribution<int> make_poisson(double load) {
  if (!(load >= 0.0) || !std::isfinite(load))
    throw domain_error("invalid load G=" + std::to_string(load) + " (must be >= 0)");
  // std::poisson_distribution requires a strictly positive mean
  return std::poisson_distribution<int>(load > 0.0 ? load : 1.0);
}

// Draws `count` distinct offsets from [lo, lo + span) in ascending order.
void draw_distinct(std::vector<SlotIndex> &out, SlotIndex lo, int span, int count, Rng &rng) {
  if (count == 0)
    return;
  const std::size_t base = out.size();
  if (4 * count <= span) {
    std::uniform_int_distribution<SlotIndex> pick(lo, lo + span - 1);
    while (static_cast<int>(out.size() - base) < count) {
      SlotIndex s = pick(rng);
      if (std::find(out.begin() + static_cast<std::ptrdiff_t>(base), out.end(), s) == out.end())
        out.push_back(s);
    }
  } else {
    std::vector<SlotIndex> pool(static_cast<std::size_t>(span));
    std::iota(pool.begin(), pool.end(), lo);
    for (int i = 0; i < count; ++i) {
      std::uniform_int_distribution<int> pick(i, span - 1);
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
    }
    out.insert(out.end(), pool.begin(), pool.begin() + count);
  }
  std::sort(out.begin() + static_cast<std::ptrdiff_t>(base), out.end());
}

} // namespace

ArrivalProcess::ArrivalProcess(double load) : load_(load), poisson_(make_poisson(load)) {}

int ArrivalProcess::next(Rng &rng) {
  if (load_ == 0.0)
    return 0;
  return poisson_(rng);
}

std::vector<int> draw_arrival_counts(double load, std::int64_t n_slots, Rng &rng) {
  ArrivalProcess arrivals(load);
  std::vector<int> counts(static_cast<std::size_t>(std::max<std::int64_t>(n_slots, 0)));
  for (auto &c : counts)
    c = arrivals.next(rng);
  return counts;
}

ReplicaPlacement place_fb(PacketId packet_id, int degree, SlotIndex frame_start, int frame_size,
                          Rng &rng) {
  if (degree < 1)
    throw domain_error("invalid degree " + std::to_string(degree));
  if (degree > frame_size)
    throw config_error("placement infeasible: degree " + std::to_string(degree) +
                       " exceeds frame size " + std::to_string(frame_size));
  ReplicaPlacement p{packet_id, degree, {}};
  p.slots.reserve(static_cast<std::size_t>(degree));
  draw_distinct(p.slots, frame_start, frame_size, degree, rng);
  return p;
}

ReplicaPlacement place_sw(PacketId packet_id, int degree, SlotIndex ready_slot, int window,
                          Rng &rng) {
  if (degree < 1)
    throw domain_error("invalid degree " + std::to_string(degree));
  if (degree > window)
    throw config_error("placement infeasible: degree " + std::to_string(degree) +
                       " exceeds window " + std::to_string(window));
  ReplicaPlacement p{packet_id, degree, {}};
  p.slots.reserve(static_cast<std::size_t>(degree));
  p.slots.push_back(ready_slot + 1);
  draw_distinct(p.slots, ready_slot + 2, window - 1, degree - 1, rng);
  return p;
}

SlotIndex next_frame_start(SlotIndex ready_slot, int frame_size) {
  if (frame_size < 1)
    throw domain_error("frame size must be >= 1");
  if (ready_slot < 0)
    return 0;
  return (ready_slot / frame_size + 1) * frame_size;
}

} // namespace crdsa
