#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "singlet/protocols.hpp"
#include "singlet/rotation.hpp"

namespace singlet {

using ojson = nlohmann::ordered_json;

// Attempt to read a message not addressed to the caller.
struct AccessViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- parties and channels ------------------------------------------------

enum class Role { dealer, agent, sender, receiver, observer };

struct PartyNode {
    int id = 0;
    Role role = Role::observer;
    PartySequence sequence;            // private: only this node reads it
    std::vector<std::size_t> inbox;    // indices into the bus log
};

struct ChannelMessage {
    int from = 0;
    int to = 0;
    int round_tag = 0;
    std::string kind;   // "trit-message", "declare", ...
    ojson payload;
};

/// Pairwise authenticated channels: every message is stored once and readable
// only by its addressee; any other read attempt throws AccessViolation.
class MessageBus {
  public:
    std::size_t send(ChannelMessage msg);

    // All undelivered messages addressed to `reader`, in send order.
    std::vector<ChannelMessage> deliver(int reader);

    // Read one message by log index on behalf of `caller`; enforces that the
    // caller is the addressee (the channel-isolation invariant).
    const ChannelMessage& read(std::size_t index, int caller) const;

    std::size_t size() const { return log_.size(); }

  private:
    std::vector<ChannelMessage> log_;
    std::vector<bool> delivered_;
};

// ---- quantum source and the test phase ------------------------------------

// Intercept-resend eavesdropper: measures each in-flight subsystem along a
// fixed direction and forwards the matching eigenstate; `fraction` of rounds
// are intercepted.
struct EavesdropperModel {
    Direction direction;
    double fraction = 1.0;
};

struct SourceRound {
    int id = 0;
    bool tampered = false;
    std::vector<std::uint8_t> eve_outcome;  // eavesdropper's permutation outcome
    Direction eve_dir;
};

// Joint outcomes when every party measures round `r` along `dir`.
// Untampered rounds yield a uniform random permutation; tampered rounds yield
// independent per-party outcomes distributed by the overlap of the resent
// eigenstates with the measurement basis.
std::vector<std::uint8_t> measure_round(const SourceRound& r, int n, Direction dir,
                                        std::mt19937_64& rng);

// Permanent of a small matrix by direct permutation enumeration (n <= 8).
double permanent(const Eigen::MatrixXd& m);

// Probability that a tampered round still yields a permutation when tested
// along `test_dir`: the permanent of the doubly stochastic overlap matrix
// Q(j,m) = |<j_test| m_eve>|^2.  (The eavesdropper's particular outcome does
// not matter: permuting columns leaves the permanent unchanged.)
double intercept_resend_pass_probability(int n, Direction test_dir, Direction eve_dir);

struct TestReport {
    std::vector<int> tested_ids;
    std::vector<bool> passed;
    bool accept = true;
    int failures = 0;
    // Per-tested-round oracle probability that the permutation check fails;
    // 0 for untampered rounds.  Basis of the detection-rate calibration.
    std::vector<double> oracle_detection_probs;
    bool insecure_no_tests = false;  // test_fraction leaves nothing tested
};

struct DistributeResult {
    std::vector<SourceRound> survivors;
    TestReport report;
};

// Distribution + acceptance phase: a beacon-chosen random subset of rounds is
// measured along beacon-chosen random common directions; a round passes iff
// the published outcome tuple is a permutation.  Any failure rejects the whole
// collection (zero survivors).
DistributeResult distribute_and_test(int n, int rounds, double test_fraction,
                                     const EavesdropperModel* adversary,
                                     std::uint64_t seed);

// Extract length-L sequences for the n parties from surviving rounds by
// measuring each along the reference direction.
std::vector<PartySequence> extract_sequences(const std::vector<SourceRound>& survivors,
                                             int n, int L, std::uint64_t seed);

// ---- loss of parties -------------------------------------------------------

struct CaptureResult {
    bool usable = false;
    std::vector<int> remaining_parties;
    // Sequences over the remaining parties (values in the complement set) and
    // the published values of captured parties, per round.
    std::vector<PartySequence> sequences;
    std::vector<std::vector<std::uint8_t>> published;
};

CaptureResult capture_parties(const std::vector<SourceRound>& survivors, int n,
                              const std::vector<int>& captured, bool publish,
                              std::uint64_t seed);

// ---- scenario orchestration -------------------------------------------------

struct ScenarioConfig {
    std::string scenario;  // "strangers" | "secret-sharing" | "liar-detection"
    int n = 0;
    int source_rounds = 0;
    double test_fraction = 0.5;
    std::uint64_t seed = 1;
    std::optional<EavesdropperModel> adversary;

    // strangers
    int assignment_rounds = 0;
    // secret sharing
    int dealer = 0;
    int cheater = -1;           // -1: all agents honest
    int cheater_position = -1;  // fixed declaration slot; -1: rotate per round
    int trials = 1;
    // liar detection
    LiarStrategy strategy = LiarStrategy::honest;
    int message = 0;
    int fabricate_k = 0;
    int sequence_length = 300;
    int runs = 1;

    static ScenarioConfig from_json(const ojson& j);
    static ScenarioConfig from_file(const std::string& path);
};

struct Transcript {
    std::vector<std::string> lines;  // serialized JSON records, in order
    ojson summary;
    int exit_class = 0;  // 0 accept/success, 2 abort or detection fired

    void record(const ojson& j) { lines.push_back(j.dump()); }
    std::string to_jsonl() const;
};

Transcript run_scenario(const ScenarioConfig& config);

}  // namespace singlet
