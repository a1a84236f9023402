#ifndef IVOTE_COUNTERS_HPP
#define IVOTE_COUNTERS_HPP

#include <cstdint>
#include <string>

namespace ivote::sim {

// Primitive-operation tallies, the cost model of the simulator. Monotone
// non-decreasing during a run; aggregation across trials is plain addition.
struct OpCounters {
    std::uint64_t asym_enc = 0;
    std::uint64_t asym_dec = 0;
    std::uint64_t sym_enc = 0;
    std::uint64_t sym_dec = 0;
    std::uint64_t hash = 0;
    std::uint64_t sign = 0;
    std::uint64_t verify = 0;

    OpCounters& operator+=(const OpCounters& o) {
        asym_enc += o.asym_enc;
        asym_dec += o.asym_dec;
        sym_enc += o.sym_enc;
        sym_dec += o.sym_dec;
        hash += o.hash;
        sign += o.sign;
        verify += o.verify;
        return *this;
    }
    friend OpCounters operator+(OpCounters a, const OpCounters& b) { return a += b; }
    bool operator==(const OpCounters&) const = default;
};

// One counter block per protocol role plus the adversary.
struct ActorCounters {
    OpCounters voterapp;
    OpCounters vfs;
    OpCounters verifapp;
    OpCounters counting;
    OpCounters attacker;

    ActorCounters& operator+=(const ActorCounters& o) {
        voterapp += o.voterapp;
        vfs += o.vfs;
        verifapp += o.verifapp;
        counting += o.counting;
        attacker += o.attacker;
        return *this;
    }
    bool operator==(const ActorCounters&) const = default;
};

}  // namespace ivote::sim

#endif
