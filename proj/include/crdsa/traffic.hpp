#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace crdsa {

using Rng = std::mt19937_64;
using SlotIndex = std::int64_t;
using PacketId = std::uint64_t;

struct PacketArrival {
  PacketId packet_id;
  SlotIndex ready_slot;
};

/// A packet and the slots carrying its copies (sorted ascending, distinct).
struct ReplicaPlacement {
  PacketId packet_id = 0;
  int degree = 0;
  std::vector<SlotIndex> slots;

  SlotIndex first_slot() const { return slots.front(); }
  SlotIndex last_slot() const { return slots.back(); }
};

/// Per-slot Poisson(G) arrival counts.
class ArrivalProcess {
public:
  explicit ArrivalProcess(double load);

  double load() const noexcept { return load_; }
  int next(Rng &rng);

private:
  double load_;
  std::poisson_distribution<int> poisson_;
};

std::vector<int> draw_arrival_counts(double load, std::int64_t n_slots, Rng &rng);

/// Frame-based placement: `degree` distinct slots drawn uniformly without
/// replacement from [frame_start, frame_start + frame_size).
ReplicaPlacement place_fb(PacketId packet_id, int degree, SlotIndex frame_start, int frame_size,
                          Rng &rng);

/// Sliding-window placement: the first copy goes to ready_slot + 1, the
/// remaining degree - 1 copies are spread uniformly without replacement over
/// (ready_slot + 1, ready_slot + window].
ReplicaPlacement place_sw(PacketId packet_id, int degree, SlotIndex ready_slot, int window,
                          Rng &rng);

/// First frame start strictly after ready_slot; frames are back-to-back
/// from slot 0, so a packet ready during frame k is sent in frame k + 1.
SlotIndex next_frame_start(SlotIndex ready_slot, int frame_size);

} // namespace crdsa
