#pragma once

#include "crdsa/traffic.hpp"

#include <climits>
#include <cstddef>
#include <span>
#include <unordered_map>
#include <vector>

namespace crdsa {

inline constexpr int kUnlimitedIterations = INT_MAX;

enum class EventKind { decoded, lost };

/// One line of the optional decoder trace.
struct DecoderEvent {
  SlotIndex slot;   // newest slot received when the event fired
  PacketId packet;
  EventKind kind;
  int iteration;    // IC iteration within the pass (0 for losses)
};

/// Burst occupancy over a contiguous slot range [first_slot, first_slot + size).
/// Every burst knows the slots of its sibling replicas.
class SlotGrid {
public:
  SlotGrid() = default;
  SlotGrid(SlotIndex first_slot, SlotIndex n_slots);

  /// Adds one burst per replica slot. All slots must lie inside the grid and
  /// the packet must not already be present.
  void add(const ReplicaPlacement &placement);
  /// Removes every burst of `packet` still in the grid.
  void remove_packet(PacketId packet);
  void reset(SlotIndex first_slot, SlotIndex n_slots);

  SlotIndex first_slot() const noexcept { return first_; }
  SlotIndex size() const noexcept { return static_cast<SlotIndex>(slots_.size()); }
  bool in_range(SlotIndex slot) const noexcept { return slot >= first_ && slot < first_ + size(); }

  const std::vector<PacketId> &occupants(SlotIndex slot) const;
  const std::vector<SlotIndex> &replicas(PacketId packet) const;
  /// Packets ever added, in insertion order.
  const std::vector<PacketId> &packets() const noexcept { return order_; }
  std::size_t burst_count() const noexcept;

private:
  std::vector<PacketId> &at(SlotIndex slot) { return slots_[static_cast<std::size_t>(slot - first_)]; }

  SlotIndex first_ = 0;
  std::vector<std::vector<PacketId>> slots_;
  std::unordered_map<PacketId, std::vector<SlotIndex>> replicas_;
  std::vector<PacketId> order_;
};

struct PeelOutcome {
  std::vector<PacketId> decoded;   // sorted ascending
  int iterations = 0;              // iterations that decoded at least one packet
};

/// Iterative interference cancellation. Each iteration decodes every packet
/// that is alone in some slot, then cancels all replicas of those packets.
/// Stops when an iteration decodes nothing or after max_iterations. The grid
/// is left holding the residual (undecoded) bursts.
PeelOutcome peel(SlotGrid &grid, int max_iterations);

struct FrameOutcome {
  std::vector<PacketId> decoded;
  std::vector<PacketId> lost;
  int iterations = 0;
};

/// Decodes one self-contained frame. Every packet with a burst in the frame
/// ends up either decoded or lost.
FrameOutcome fb_decode(SlotGrid &frame, int max_iterations);

/// Fixed-point peeling by the naive restart-on-change method: find any
/// singleton slot (scanning in `scan_order`, or ascending when empty), decode
/// its packet, cancel it everywhere, start over. Intended for small instances.
std::vector<PacketId> oracle_peel(const SlotGrid &grid, std::span<const SlotIndex> scan_order = {});

/// A received burst: the packet and the slots of all its replicas.
struct Burst {
  PacketId packet;
  std::span<const SlotIndex> replicas;
};

/// Streaming receiver for the sliding-window scheme.
///
/// Slots are ingested in increasing order into a FIFO buffer of
/// `buffer_capacity` slots. Each ingest cancels bursts of packets already
/// decoded, then runs up to `max_iterations` IC iterations over the buffer.
/// Overflowing slots are evicted oldest first; an undecoded packet is
/// declared lost when the slot holding its last replica is evicted.
class SlidingWindowDecoder {
public:
  SlidingWindowDecoder(int window, int buffer_capacity, int max_iterations);

  /// Appends `slot` with the given bursts and returns decode/loss events in
  /// the order they happened. Skipped slot indices are treated as empty.
  std::vector<DecoderEvent> ingest(SlotIndex slot, std::span<const Burst> bursts);

  int window() const noexcept { return window_; }
  int buffer_capacity() const noexcept { return capacity_; }
  int max_iterations() const noexcept { return max_iterations_; }

  bool started() const noexcept { return started_; }
  SlotIndex oldest_slot() const noexcept { return oldest_; }
  SlotIndex newest_slot() const noexcept { return newest_; }
  SlotIndex buffered_slots() const noexcept { return started_ ? newest_ - oldest_ + 1 : 0; }

  std::size_t decoded_count() const noexcept { return decoded_count_; }
  std::size_t lost_count() const noexcept { return lost_count_; }
  /// Packets seen but neither decoded nor lost yet.
  std::size_t pending_count() const noexcept { return pending_count_; }
  /// Undecoded bursts currently held in the buffer.
  std::size_t buffered_bursts() const noexcept;

  /// Largest per-ingest iteration count seen so far.
  int peak_iterations() const noexcept { return peak_iterations_; }

private:
  struct Entry {
    std::vector<SlotIndex> replicas;
    bool decoded = false;
  };

  std::vector<PacketId> &slot_at(SlotIndex slot) {
    return ring_[static_cast<std::size_t>(slot % static_cast<SlotIndex>(ring_.size()))];
  }
  bool buffered(SlotIndex slot) const noexcept { return slot >= oldest_ && slot <= newest_; }

  void ingest_one(SlotIndex slot, std::span<const Burst> bursts, std::vector<DecoderEvent> &events);
  void run_iterations(std::vector<DecoderEvent> &events);
  void evict_oldest(std::vector<DecoderEvent> &events);

  int window_;
  int capacity_;
  int max_iterations_;

  bool started_ = false;
  SlotIndex oldest_ = 0;
  SlotIndex newest_ = -1;
  std::vector<std::vector<PacketId>> ring_;
  std::unordered_map<PacketId, Entry> packets_;
  std::vector<SlotIndex> frontier_;
  std::vector<PacketId> scratch_;

  std::size_t decoded_count_ = 0;
  std::size_t lost_count_ = 0;
  std::size_t pending_count_ = 0;
  int peak_iterations_ = 0;
};

} // namespace crdsa
