#include "crdsa/decoder.hpp"
#include "crdsa/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

using namespace crdsa;

namespace {

ReplicaPlacement packet(PacketId id, std::vector<SlotIndex> slots) {
  const int degree = static_cast<int>(slots.size());
  return {id, degree, std::move(slots)};
}

SlotGrid random_instance(Rng &rng, int max_packets = 12, int max_slots = 20, int max_degree = 4) {
  const int n_slots = std::uniform_int_distribution<int>(1, max_slots)(rng);
  const int n_packets = std::uniform_int_distribution<int>(0, max_packets)(rng);
  SlotGrid grid(0, n_slots);
  for (int p = 0; p < n_packets; ++p) {
    const int degree = std::uniform_int_distribution<int>(1, std::min(max_degree, n_slots))(rng);
    grid.add(place_fb(static_cast<PacketId>(p), degree, 0, n_slots, rng));
  }
  return grid;
}

std::vector<PacketId> ids(std::initializer_list<PacketId> l) { return l; }

} // namespace

TEST_CASE("peel on hand-built grids") {
  SUBCASE("empty grid") {
    SlotGrid g(0, 10);
    const auto out = peel(g, 50);
    CHECK(out.decoded.empty());
    CHECK(g.burst_count() == 0);
  }
  SUBCASE("a lone packet decodes in the first iteration") {
    SlotGrid g(0, 5);
    g.add(packet(1, {1, 2}));
    const auto out = peel(g, 50);
    CHECK(out.decoded == ids({1}));
    CHECK(out.iterations == 1);
    CHECK(g.burst_count() == 0);
  }
  SUBCASE("two packets sharing both slots never resolve") {
    SlotGrid g(0, 5);
    g.add(packet(0xA, {1, 2}));
    g.add(packet(0xB, {1, 2}));
    CHECK(peel(g, 50).decoded.empty());
    CHECK(oracle_peel(g).empty());
    CHECK(g.burst_count() == 4);
  }
  SUBCASE("a chain unlocks step by step") {
    // slot 1 holds only A and slot 4 only C; cancelling them frees B in slot 2
    SlotGrid g(0, 6);
    g.add(packet(0xA, {1, 2}));
    g.add(packet(0xB, {2, 3}));
    g.add(packet(0xC, {3, 4}));
    SlotGrid first = g;
    const auto one = peel(first, 1);
    CHECK(one.decoded == ids({0xA, 0xC}));
    const auto out = peel(g, 50);
    CHECK(out.decoded == ids({0xA, 0xB, 0xC}));
    CHECK(out.iterations == 2);
    CHECK(out.iterations <= 3);
  }
  SUBCASE("invalid budget") {
    SlotGrid g(0, 1);
    CHECK_THROWS_AS(peel(g, 0), Error);
  }
}

TEST_CASE("slot grid bookkeeping") {
  SlotGrid g(100, 10);
  CHECK_THROWS_AS(g.add(packet(1, {99, 100})), Error);
  CHECK_THROWS_AS(g.add(packet(1, {101, 101})), Error);
  g.add(packet(1, {101, 105}));
  CHECK_THROWS_AS(g.add(packet(1, {102})), Error);
  CHECK(g.occupants(105) == ids({1}));
  CHECK(g.replicas(1) == std::vector<SlotIndex>{101, 105});
  g.remove_packet(1);
  CHECK(g.occupants(101).empty());
  CHECK(g.replicas(1).size() == 2);
}

TEST_CASE("frame decoding") {
  SUBCASE("empty frame") {
    SlotGrid g(0, 200);
    const auto out = fb_decode(g, 50);
    CHECK(out.decoded.empty());
    CHECK(out.lost.empty());
  }
  SUBCASE("deadlocked pair is lost") {
    SlotGrid g(0, 200);
    g.add(packet(0xA, {1, 2}));
    g.add(packet(0xB, {1, 2}));
    g.add(packet(0xC, {7, 9}));
    const auto out = fb_decode(g, 50);
    CHECK(out.decoded == ids({0xC}));
    CHECK(out.lost == ids({0xA, 0xB}));
  }
}

TEST_CASE("oracle basics") {
  SlotGrid empty(0, 4);
  CHECK(oracle_peel(empty).empty());
  SlotGrid single(0, 4);
  single.add(packet(9, {2}));
  CHECK(oracle_peel(single) == ids({9}));
}

TEST_CASE("peel agrees with the oracle on random small instances") {
  Rng rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const SlotGrid grid = random_instance(rng);
    const auto expected = oracle_peel(grid);

    SlotGrid unlimited = grid;
    CHECK(peel(unlimited, kUnlimitedIterations).decoded == expected);
    SlotGrid capped = grid;
    CHECK(peel(capped, 50).decoded == expected);

    // confluence: any scan order reaches the same fixed point
    std::vector<SlotIndex> order(static_cast<std::size_t>(grid.size()));
    std::iota(order.begin(), order.end(), grid.first_slot());
    for (int k = 0; k < 3; ++k) {
      std::shuffle(order.begin(), order.end(), rng);
      CHECK(oracle_peel(grid, order) == expected);
    }
  }
}

TEST_CASE("peel properties") {
  Rng rng(77);
  for (int i = 0; i < 500; ++i) {
    const SlotGrid grid = random_instance(rng, 40, 30, 4);

    // monotone in the iteration budget
    std::vector<PacketId> previous;
    for (int k = 1; k <= 8; ++k) {
      SlotGrid g = grid;
      const auto out = peel(g, k);
      CHECK(std::includes(out.decoded.begin(), out.decoded.end(), previous.begin(),
                          previous.end()));
      previous = out.decoded;
    }

    // cancellation only ever shrinks slots, and removes every decoded burst
    SlotGrid g = grid;
    const auto out = peel(g, 50);
    for (SlotIndex s = g.first_slot(); s < g.first_slot() + g.size(); ++s) {
      CHECK(g.occupants(s).size() <= grid.occupants(s).size());
      for (PacketId p : g.occupants(s))
        CHECK_FALSE(std::binary_search(out.decoded.begin(), out.decoded.end(), p));
    }
  }
}

TEST_CASE("sliding-window decoder on small scripts") {
  SUBCASE("single packet decodes on its first clean copy") {
    SlidingWindowDecoder dec(4, 20, 50);
    const std::vector<SlotIndex> reps{1, 2};
    const Burst b{1, reps};
    CHECK(dec.ingest(0, {}).empty());
    const auto ev = dec.ingest(1, std::span(&b, 1));
    REQUIRE(ev.size() == 1);
    CHECK(ev[0].packet == 1);
    CHECK(ev[0].kind == EventKind::decoded);
    CHECK(ev[0].slot == 1);
    CHECK(dec.ingest(2, std::span(&b, 1)).empty());
    CHECK(dec.buffered_bursts() == 0);
    CHECK(dec.decoded_count() == 1);
    CHECK(dec.pending_count() == 0);
  }
  SUBCASE("deadlocked pair is lost once both slots leave the buffer") {
    SlidingWindowDecoder dec(2, 2, 50);
    const std::vector<SlotIndex> reps{1, 2};
    const std::vector<Burst> both{{0xA, reps}, {0xB, reps}};
    CHECK(dec.ingest(1, both).empty());
    CHECK(dec.ingest(2, both).empty());
    CHECK(dec.ingest(3, {}).empty());        // evicts slot 1; the packets still have slot 2
    CHECK(dec.pending_count() == 2);
    const auto ev = dec.ingest(4, {});       // evicts slot 2
    REQUIRE(ev.size() == 2);
    CHECK(ev[0].kind == EventKind::lost);
    CHECK(ev[1].kind == EventKind::lost);
    CHECK(dec.lost_count() == 2);
    CHECK(dec.pending_count() == 0);
  }
  SUBCASE("cancellation reaches back into the buffer") {
    // A:{1,3} B:{1,2} C:{2,5}; slot 3 frees A, then B in slot 1, then C in slot 2
    SlidingWindowDecoder dec(5, 25, 50);
    const std::vector<SlotIndex> a{1, 3}, b{1, 2}, c{2, 5};
    const std::vector<Burst> s1{{0xA, a}, {0xB, b}}, s2{{0xB, b}, {0xC, c}}, s3{{0xA, a}};
    CHECK(dec.ingest(1, s1).empty());
    CHECK(dec.ingest(2, s2).empty());
    const auto ev = dec.ingest(3, s3);
    REQUIRE(ev.size() == 3);
    CHECK(ev[0].packet == 0xA);
    CHECK(ev[0].iteration == 1);
    CHECK(ev[1].packet == 0xB);
    CHECK(ev[1].iteration == 2);
    CHECK(ev[2].packet == 0xC);
    CHECK(ev[2].iteration == 3);
  }
  SUBCASE("a small iteration budget resumes on the next ingest") {
    SlidingWindowDecoder dec(5, 25, 1);
    const std::vector<SlotIndex> a{1, 3}, b{1, 2}, c{2, 5};
    const std::vector<Burst> s1{{0xA, a}, {0xB, b}}, s2{{0xB, b}, {0xC, c}}, s3{{0xA, a}};
    dec.ingest(1, s1);
    dec.ingest(2, s2);
    CHECK(dec.ingest(3, s3).size() == 1);
    CHECK(dec.ingest(4, {}).size() == 1);
    CHECK(dec.ingest(5, {}).size() == 1);
    CHECK(dec.decoded_count() == 3);
  }
  SUBCASE("protocol errors") {
    SlidingWindowDecoder dec(4, 8, 50);
    dec.ingest(5, {});
    CHECK_THROWS_AS(dec.ingest(5, {}), Error);
    CHECK_THROWS_AS(dec.ingest(3, {}), Error);
    const std::vector<SlotIndex> reps{7, 9};
    const Burst wrong{1, reps};
    CHECK_THROWS_AS(dec.ingest(8, std::span(&wrong, 1)), Error);
    CHECK_THROWS_AS(SlidingWindowDecoder(4, 3, 50), Error);
  }
  SUBCASE("gaps are filled with empty slots") {
    SlidingWindowDecoder dec(2, 2, 50);
    dec.ingest(0, {});
    dec.ingest(10, {});
    CHECK(dec.oldest_slot() == 9);
    CHECK(dec.buffered_slots() == 2);
  }
}

TEST_CASE("sliding-window decoding with ample memory reaches the global fixed point") {
  // Streams random sliding-window traffic through the decoder and compares
  // the decoded set with the oracle run on the whole bipartite graph.
  Rng rng(5);
  for (int run = 0; run < 20; ++run) {
    const int window = 8;
    const SlotIndex horizon = 120;
    ArrivalProcess arrivals(0.45 + 0.02 * run);
    std::uniform_int_distribution<int> degree(2, 3);

    std::vector<ReplicaPlacement> placements;
    for (SlotIndex t = 0; t < horizon; ++t)
      for (int n = arrivals.next(rng); n > 0; --n)
        placements.push_back(place_sw(placements.size(), degree(rng), t, window, rng));

    SlotGrid whole(0, horizon + window + 1);
    std::map<SlotIndex, std::vector<Burst>> channel;
    for (const auto &p : placements) {
      whole.add(p);
      for (SlotIndex s : p.slots)
        channel[s].push_back({p.packet_id, p.slots});
    }
    const auto expected = oracle_peel(whole);

    SlidingWindowDecoder dec(window, 1000, 50);
    std::set<PacketId> decoded, lost;
    for (SlotIndex t = 0; t < horizon + window + 1 + 1000 + 1; ++t) {
      const auto &bursts = channel[t];
      for (const auto &e : dec.ingest(t, bursts))
        (e.kind == EventKind::decoded ? decoded : lost).insert(e.packet);
    }
    CHECK(std::vector<PacketId>(decoded.begin(), decoded.end()) == expected);
    // conservation after the drain
    CHECK(decoded.size() + lost.size() == placements.size());
    CHECK(dec.pending_count() == 0);
    for (PacketId p : decoded)
      CHECK(lost.count(p) == 0);
  }
}
