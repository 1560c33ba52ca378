#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "singlet/common.hpp"

namespace singlet {

// One party's private sequence over {0..n-1}.  Across the n parties, every
// position holds a permutation of {0..n-1}; each party sees only its own row.
struct PartySequence {
    int party = 0;
    std::vector<std::uint8_t> values;
};

// Produces one joint outcome column (a permutation of {0..n-1}) per call;
// bound either to the measurement sampler or to surviving source rounds.
using ColumnSource = std::function<std::vector<std::uint8_t>()>;

// Column source backed by the common-direction measurement sampler.
ColumnSource make_measurement_source(int n, std::uint64_t seed);

// n sequences of length L; throws if the source ever yields a non-permutation.
std::vector<PartySequence> generate_sequences(int n, int L, const ColumnSource& source);

// ---- problem 1: pairing by private lottery -----------------------------

struct Assignment {
    int round = 0;
    std::vector<std::uint8_t> victim_of;  // index i -> label assigned to party i
};

// Party i is assigned label sequences[i].values[round]; bijective because the
// column is a permutation.
Assignment strangers_assign(const std::vector<PartySequence>& sequences, int round);

// ---- problem 2: secret sharing with declaration rounds ------------------

// A cheating agent declares a false value drawn uniformly from the values
// that are not its own and have not been declared yet (any other choice is
// caught immediately or is equivalent by symmetry).
struct CheatStrategy {
    int cheater = -1;  // party id of the dishonest agent
};

struct SharedKeyRound {
    int round = 0;
    int dealer = 0;
    std::vector<std::pair<int, std::uint8_t>> declared;  // (party, value) in order
    std::optional<std::uint8_t> reconstructed;           // empty on abort
    bool aborted = false;
    std::optional<int> caught_by;  // party whose declaration exposed the lie
    // r accounting at the cheater's turn (meaningful only when a cheater acted):
    int r_honest_undeclared = 0;  // later honest agents + the dealer
    int r_all_undeclared = 0;     // the above + the cheater itself
};

// Reconstruction round: every agent in declare_order announces its value for
// `round`; the key value is the unique member of {0..n-1} missing from the
// declarations.  Any duplicated declaration aborts the round at the point the
// duplicate appears.
SharedKeyRound secret_share_round(const std::vector<PartySequence>& sequences,
                                  int dealer,
                                  const std::vector<int>& declare_order,
                                  const CheatStrategy* cheater,
                                  std::mt19937_64& rng,
                                  int round);

// Declaration order for a given round: non-dealer parties rotated so each
// occupies the last slot equally often across consecutive rounds.
std::vector<int> rotated_declare_order(int n, int dealer, int round);

// ---- problem 3: three-party liar detection over trit messages -----------

struct TritMessage {
    std::uint8_t value = 0;            // claimed trit
    std::vector<int> positions;        // ascending support positions
};

// Honest sender: the full list of positions where its sequence equals value.
TritMessage liar_send(const PartySequence& sender, std::uint8_t value);

// Dishonest sender injecting k fabricated positions (positions where its own
// sequence does not hold `value`) on top of the honest list.
TritMessage liar_send_fabricated(const PartySequence& sender, std::uint8_t value,
                                 int k, std::mt19937_64& rng);

// Messages a dishonest relay B sends to C when claiming value `claimed`:
// both lists must come from B's own value-class (the only positions B can
// name without risking the receiver-side intersection check), so the class
// is split between them.
struct RelayedPair {
    TritMessage own;      // "B's positions for the claimed value"
    TritMessage relayed;  // "A's positions for the claimed value" (forged)
};
RelayedPair liar_dishonest_relay(const PartySequence& b, std::uint8_t claimed);

// Rule-of-acceptance threshold: lists shorter than L/3 - 3*sqrt(L*(1/3)(2/3))
// are rejected as implausibly short.
double liar_length_threshold(int L);

// Receiver-side check: reject when the claimed positions intersect the
// receiver's own value-class, when a position is malformed, or when the list
// is implausibly short.
bool liar_receive(const PartySequence& receiver, const TritMessage& msg);

struct Verdict {
    char accused = '?';  // 'A' or 'B'
    int len_own = 0;
    int len_relayed = 0;
    double threshold = 0.0;
};

// Called by C when the direct value from A conflicts with B's relay: B's two
// lists should jointly cover about 2L/3 positions if genuine, only about L/3
// if forged from B's single value-class.  Returns nullopt when there is no
// conflict to adjudicate.
std::optional<Verdict> liar_adjudicate(const PartySequence& c,
                                       const TritMessage& from_a,
                                       const TritMessage& from_b_own,
                                       const TritMessage& from_b_relayed);

// ---- scripted liar-game rounds used by calibration and scenarios --------

enum class LiarStrategy { honest, dishonest_a, dishonest_b, fabricator };

// The four messages of one liar-game round: A->B, A->C, and B's two lists
// to C (its own-class list and the forwarded "A" list).
struct LiarMessages {
    TritMessage a_to_b;
    TritMessage a_to_c;
    TritMessage b_own;
    TritMessage b_relayed;
};

LiarMessages liar_messages(const std::vector<PartySequence>& seqs,
                           LiarStrategy strategy, std::uint8_t message,
                           int fabricate_k, std::mt19937_64& rng);

struct LiarRoundOutcome {
    bool conflict = false;
    bool receive_rejected = false;  // some rule-II check failed
    std::optional<Verdict> verdict;
};

// Receiver-side checks and (on conflict) adjudication for one round's messages.
LiarRoundOutcome liar_evaluate(const std::vector<PartySequence>& seqs,
                               const LiarMessages& msgs);

// Full A->B, A->C, B-relay->C round over three fresh sequences.
LiarRoundOutcome liar_round(const std::vector<PartySequence>& seqs,
                            LiarStrategy strategy, std::uint8_t message,
                            int fabricate_k, std::mt19937_64& rng);

}  // namespace singlet
