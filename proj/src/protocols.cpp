#include "singlet/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "singlet/permutation.hpp"
#include "singlet/sampling.hpp"
#include "singlet/state.hpp"

namespace singlet {

ColumnSource make_measurement_source(int n, std::uint64_t seed) {
    auto rng = std::make_shared<std::mt19937_64>(derive_seed(seed, 0x5e9u));
    return [n, rng]() { return random_permutation(n, *rng); };
}

std::vector<PartySequence> generate_sequences(int n, int L,
                                              const ColumnSource& source) {
    std::vector<PartySequence> seqs(n);
    for (int p = 0; p < n; ++p) {
        seqs[p].party = p;
        seqs[p].values.resize(L);
    }
    for (int j = 0; j < L; ++j) {
        const std::vector<std::uint8_t> column = source();
        if (!is_permutation_tuple(column, n))
            throw ConfigError("generate_sequences: source yielded a non-permutation column");
        for (int p = 0; p < n; ++p) seqs[p].values[j] = column[p];
    }
    return seqs;
}

Assignment strangers_assign(const std::vector<PartySequence>& sequences, int round) {
    const int n = static_cast<int>(sequences.size());
    if (sequences.empty() || round < 0 ||
        round >= static_cast<int>(sequences[0].values.size()))
        throw std::out_of_range("strangers_assign: round out of range");
    Assignment a;
    a.round = round;
    a.victim_of.resize(n);
    for (int i = 0; i < n; ++i) a.victim_of[i] = sequences[i].values[round];
    if (!is_permutation_tuple(a.victim_of, n))
        throw ConfigError("strangers_assign: column is not a permutation");
    return a;
}

std::vector<int> rotated_declare_order(int n, int dealer, int round) {
    std::vector<int> agents;
    for (int p = 0; p < n; ++p)
        if (p != dealer) agents.push_back(p);
    const int k = static_cast<int>(agents.size());
    std::vector<int> order(k);
    for (int i = 0; i < k; ++i) order[i] = agents[(i + round) % k];
    return order;
}

SharedKeyRound secret_share_round(const std::vector<PartySequence>& sequences,
                                  int dealer,
                                  const std::vector<int>& declare_order,
                                  const CheatStrategy* cheater,
                                  std::mt19937_64& rng,
                                  int round) {
    const int n = static_cast<int>(sequences.size());
    if (dealer < 0 || dealer >= n) throw ConfigError("secret_share_round: bad dealer id");
    if (static_cast<int>(declare_order.size()) != n - 1)
        throw ConfigError("secret_share_round: declare_order must cover all agents");

    SharedKeyRound result;
    result.round = round;
    result.dealer = dealer;

    std::vector<bool> value_declared(n, false);
    int declared_count = 0;

    for (int slot = 0; slot < n - 1; ++slot) {
        const int party = declare_order[slot];
        if (party == dealer) throw ConfigError("secret_share_round: dealer in declare_order");
        const std::uint8_t truth = sequences[party].values[round];

        std::uint8_t announced = truth;
        if (cheater != nullptr && party == cheater->cheater) {
            // r accounting at this turn. Later honest agents still to declare
            // plus the dealer are the honest parties whose value the lie can
            // collide with; the wider count also includes the cheater itself.
            const int later_honest = (n - 1) - slot - 1;
            result.r_honest_undeclared = later_honest + 1;
            result.r_all_undeclared = later_honest + 2;

            std::vector<std::uint8_t> candidates;
            for (int v = 0; v < n; ++v)
                if (!value_declared[v] && v != truth)
                    candidates.push_back(static_cast<std::uint8_t>(v));
            if (candidates.empty())
                throw ConfigError("secret_share_round: cheater has no value to forge");
            announced = candidates[bounded_rand(rng, candidates.size())];
        }

        result.declared.emplace_back(party, announced);
        if (value_declared[announced]) {
            // Duplicate declaration: the lie collided with the value this
            // (truthful) party holds, so its announcement exposes the cheat.
            result.aborted = true;
            result.caught_by = party;
            return result;
        }
        value_declared[announced] = true;
        ++declared_count;
    }

    (void)declared_count;
    // No duplicates among the n-1 declarations: reconstruct the missing value.
    int sum = 0;
    for (const auto& [p, v] : result.declared) sum += v;
    result.reconstructed =
        static_cast<std::uint8_t>(n * (n - 1) / 2 - sum);
    return result;
}

TritMessage liar_send(const PartySequence& sender, std::uint8_t value) {
    TritMessage msg;
    msg.value = value;
    for (std::size_t j = 0; j < sender.values.size(); ++j)
        if (sender.values[j] == value) msg.positions.push_back(static_cast<int>(j));
    return msg;
}

TritMessage liar_send_fabricated(const PartySequence& sender, std::uint8_t value,
                                 int k, std::mt19937_64& rng) {
    TritMessage msg = liar_send(sender, value);
    std::vector<int> foreign;
    for (std::size_t j = 0; j < sender.values.size(); ++j)
        if (sender.values[j] != value) foreign.push_back(static_cast<int>(j));
    if (k > static_cast<int>(foreign.size()))
        throw ConfigError("liar_send_fabricated: not enough positions to forge");
    // Sample k distinct foreign positions.
    for (int i = 0; i < k; ++i) {
        const auto j = static_cast<std::size_t>(
            bounded_rand(rng, foreign.size() - i));
        msg.positions.push_back(foreign[j]);
        std::swap(foreign[j], foreign[foreign.size() - 1 - i]);
    }
    std::sort(msg.positions.begin(), msg.positions.end());
    return msg;
}

RelayedPair liar_dishonest_relay(const PartySequence& b, std::uint8_t claimed) {
    const TritMessage own_class = liar_send(b, claimed);
    RelayedPair pair;
    pair.own.value = claimed;
    pair.relayed.value = claimed;
    // Split the single safe class between the two lists (even/odd positions),
    // the best-effort attempt to make both look like genuine L/3 lists.
    for (std::size_t i = 0; i < own_class.positions.size(); ++i) {
        if (i % 2 == 0)
            pair.own.positions.push_back(own_class.positions[i]);
        else
            pair.relayed.positions.push_back(own_class.positions[i]);
    }
    return pair;
}

double liar_length_threshold(int L) {
    return L / 3.0 - 3.0 * std::sqrt(L * (1.0 / 3.0) * (2.0 / 3.0));
}

namespace {

// Shared part of the receive check: a strictly increasing in-range position
// list that never lands on a position where the receiver holds the claimed
// value itself.
bool well_formed_disjoint(const PartySequence& receiver, const TritMessage& msg) {
    const int L = static_cast<int>(receiver.values.size());
    int prev = -1;
    for (int p : msg.positions) {
        if (p < 0 || p >= L || p <= prev) return false;  // malformed list
        if (receiver.values[p] == msg.value) return false;  // intersection
        prev = p;
    }
    return true;
}

}  // namespace

bool liar_receive(const PartySequence& receiver, const TritMessage& msg) {
    if (!well_formed_disjoint(receiver, msg)) return false;
    const int L = static_cast<int>(receiver.values.size());
    return static_cast<double>(msg.positions.size()) >= liar_length_threshold(L);
}

std::optional<Verdict> liar_adjudicate(const PartySequence& c,
                                       const TritMessage& from_a,
                                       const TritMessage& from_b_own,
                                       const TritMessage& from_b_relayed) {
    if (from_a.value == from_b_own.value) return std::nullopt;  // no conflict
    Verdict v;
    v.len_own = static_cast<int>(from_b_own.positions.size());
    v.len_relayed = static_cast<int>(from_b_relayed.positions.size());
    v.threshold = static_cast<double>(c.values.size()) / 2.0;
    v.accused = (v.len_own + v.len_relayed >= v.threshold) ? 'A' : 'B';
    return v;
}

LiarMessages liar_messages(const std::vector<PartySequence>& seqs,
                           LiarStrategy strategy, std::uint8_t message,
                           int fabricate_k, std::mt19937_64& rng) {
    if (seqs.size() != 3) throw ConfigError("liar game: three parties required");
    const PartySequence& a = seqs[0];
    const PartySequence& b = seqs[1];

    LiarMessages m;
    switch (strategy) {
        case LiarStrategy::honest: {
            m.a_to_b = liar_send(a, message);
            m.a_to_c = liar_send(a, message);
            m.b_own = liar_send(b, message);
            m.b_relayed = m.a_to_b;  // forwarded verbatim
            break;
        }
        case LiarStrategy::dishonest_a: {
            // A tells B one trit and C another, with genuine lists for each.
            const auto other = static_cast<std::uint8_t>((message + 1) % 3);
            m.a_to_b = liar_send(a, message);
            m.a_to_c = liar_send(a, other);
            m.b_own = liar_send(b, message);
            m.b_relayed = m.a_to_b;
            break;
        }
        case LiarStrategy::dishonest_b: {
            // A is consistent; B claims a different trit toward C.
            m.a_to_b = liar_send(a, message);
            m.a_to_c = liar_send(a, message);
            const auto claimed = static_cast<std::uint8_t>((message + 1) % 3);
            const RelayedPair pair = liar_dishonest_relay(b, claimed);
            m.b_own = pair.own;
            m.b_relayed = pair.relayed;
            break;
        }
        case LiarStrategy::fabricator: {
            // Honest values, but A pads its list to C with forged positions.
            m.a_to_b = liar_send(a, message);
            m.a_to_c = liar_send_fabricated(a, message, fabricate_k, rng);
            m.b_own = liar_send(b, message);
            m.b_relayed = m.a_to_b;
            break;
        }
    }
    return m;
}

LiarRoundOutcome liar_evaluate(const std::vector<PartySequence>& seqs,
                               const LiarMessages& msgs) {
    if (seqs.size() != 3) throw ConfigError("liar game: three parties required");
    const PartySequence& b = seqs[1];
    const PartySequence& c = seqs[2];

    LiarRoundOutcome out;

    // Directly authored lists face the full acceptance test; the forwarded
    // list is only screened for form and overlap, since its length is exactly
    // what the cross-check below adjudicates.
    const bool b_accepts = liar_receive(b, msgs.a_to_b);
    const bool c_accepts_a = liar_receive(c, msgs.a_to_c);
    const bool c_accepts_b_own = liar_receive(c, msgs.b_own);
    const bool c_accepts_b_relayed = well_formed_disjoint(c, msgs.b_relayed);
    out.receive_rejected =
        !(b_accepts && c_accepts_a && c_accepts_b_own && c_accepts_b_relayed);

    out.conflict = (msgs.a_to_c.value != msgs.b_own.value);
    if (out.conflict)
        out.verdict = liar_adjudicate(c, msgs.a_to_c, msgs.b_own, msgs.b_relayed);
    return out;
}

LiarRoundOutcome liar_round(const std::vector<PartySequence>& seqs,
                            LiarStrategy strategy, std::uint8_t message,
                            int fabricate_k, std::mt19937_64& rng) {
    return liar_evaluate(seqs,
                         liar_messages(seqs, strategy, message, fabricate_k, rng));
}

}  // namespace singlet
