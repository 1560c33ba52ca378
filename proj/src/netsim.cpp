#include "singlet/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>

#include "singlet/permutation.hpp"
#include "singlet/sampling.hpp"
#include "singlet/state.hpp"

namespace singlet {

namespace {

// Stream tags for the independent random streams of one scenario seed.
constexpr std::uint64_t kBeaconStream = 0xbeac0;
constexpr std::uint64_t kEveStream = 0xe4e5;
constexpr std::uint64_t kMeasureStreamBase = 0x40000000ull;
constexpr std::uint64_t kProtocolStreamBase = 0x90000000ull;

}  // namespace

// ---- message bus -----------------------------------------------------------

std::size_t MessageBus::send(ChannelMessage msg) {
    log_.push_back(std::move(msg));
    delivered_.push_back(false);
    return log_.size() - 1;
}

std::vector<ChannelMessage> MessageBus::deliver(int reader) {
    std::vector<ChannelMessage> out;
    for (std::size_t i = 0; i < log_.size(); ++i) {
        if (!delivered_[i] && log_[i].to == reader) {
            delivered_[i] = true;
            out.push_back(log_[i]);
        }
    }
    return out;
}

const ChannelMessage& MessageBus::read(std::size_t index, int caller) const {
    const ChannelMessage& msg = log_.at(index);
    if (msg.to != caller)
        throw AccessViolation("message bus: party " + std::to_string(caller) +
                              " attempted to read a message addressed to party " +
                              std::to_string(msg.to));
    return msg;
}

// ---- source rounds and the test phase ---------------------------------------

std::vector<std::uint8_t> measure_round(const SourceRound& r, int n, Direction dir,
                                        std::mt19937_64& rng) {
    if (!r.tampered) return random_permutation(n, rng);

    // Resent eigenstates along eve_dir measured along dir: each party draws
    // independently from the overlap row of its resent state.
    const auto frame = SpinFrame::make(n);
    const Matrix ud = rotation_operator(frame, dir).u;
    const Matrix ue = rotation_operator(frame, r.eve_dir).u;
    const Matrix overlap = ud.adjoint() * ue;

    std::vector<std::uint8_t> outcome(n);
    for (int k = 0; k < n; ++k) {
        const int m = r.eve_outcome[k];
        double x = unit_real(rng);
        int pick = n - 1;
        for (int j = 0; j < n; ++j) {
            x -= std::norm(overlap(j, m));
            if (x < 0.0) {
                pick = j;
                break;
            }
        }
        outcome[k] = static_cast<std::uint8_t>(pick);
    }
    return outcome;
}

double permanent(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    if (n != m.cols() || n > 8)
        throw DimensionError("permanent: square matrix with n <= 8 required");
    double sum = 0.0;
    for_each_permutation(n, [&](std::span<const std::uint8_t> p) {
        double prod = 1.0;
        for (int k = 0; k < n; ++k) prod *= m(k, p[k]);
        sum += prod;
    });
    return sum;
}

double intercept_resend_pass_probability(int n, Direction test_dir, Direction eve_dir) {
    const auto frame = SpinFrame::make(n);
    const Matrix ud = rotation_operator(frame, test_dir).u;
    const Matrix ue = rotation_operator(frame, eve_dir).u;
    const Matrix overlap = ud.adjoint() * ue;
    Eigen::MatrixXd q(n, n);
    for (int j = 0; j < n; ++j)
        for (int m = 0; m < n; ++m) q(j, m) = std::norm(overlap(j, m));
    return permanent(q);
}

DistributeResult distribute_and_test(int n, int rounds, double test_fraction,
                                     const EavesdropperModel* adversary,
                                     std::uint64_t seed) {
    if (test_fraction < 0.0 || test_fraction >= 1.0)
        throw ConfigError("distribute_and_test: test_fraction must be in [0, 1)");

    auto beacon = make_stream(seed, kBeaconStream);
    auto eve_rng = make_stream(seed, kEveStream);

    DistributeResult result;
    result.report.insecure_no_tests = (test_fraction == 0.0);

    std::vector<SourceRound> all(rounds);
    for (int i = 0; i < rounds; ++i) {
        all[i].id = i;
        if (adversary != nullptr && unit_real(eve_rng) < adversary->fraction) {
            all[i].tampered = true;
            all[i].eve_dir = adversary->direction;
            all[i].eve_outcome = random_permutation(n, eve_rng);
        }
    }

    for (int i = 0; i < rounds; ++i) {
        const bool tested = test_fraction > 0.0 && unit_real(beacon) < test_fraction;
        if (!tested) {
            result.survivors.push_back(all[i]);
            continue;
        }
        const Direction dir = random_direction(beacon);
        auto rng = make_stream(seed, kMeasureStreamBase + static_cast<std::uint64_t>(i));
        const auto outcome = measure_round(all[i], n, dir, rng);
        const bool pass = is_permutation_tuple(outcome, n);

        result.report.tested_ids.push_back(i);
        result.report.passed.push_back(pass);
        result.report.oracle_detection_probs.push_back(
            all[i].tampered
                ? 1.0 - intercept_resend_pass_probability(n, dir, all[i].eve_dir)
                : 0.0);
        if (!pass) {
            result.report.accept = false;
            ++result.report.failures;
        }
    }

    if (!result.report.accept) result.survivors.clear();
    return result;
}

std::vector<PartySequence> extract_sequences(const std::vector<SourceRound>& survivors,
                                             int n, int L, std::uint64_t seed) {
    if (L > static_cast<int>(survivors.size()))
        throw CapacityError("extract_sequences: fewer surviving rounds than requested length");
    std::vector<PartySequence> seqs(n);
    for (int p = 0; p < n; ++p) {
        seqs[p].party = p;
        seqs[p].values.resize(L);
    }
    for (int j = 0; j < L; ++j) {
        const SourceRound& r = survivors[j];
        auto rng = make_stream(seed,
                               kMeasureStreamBase + static_cast<std::uint64_t>(r.id));
        const auto column = measure_round(r, n, Direction::z(), rng);
        for (int p = 0; p < n; ++p) seqs[p].values[j] = column[p];
    }
    return seqs;
}

CaptureResult capture_parties(const std::vector<SourceRound>& survivors, int n,
                              const std::vector<int>& captured, bool publish,
                              std::uint64_t seed) {
    CaptureResult result;
    std::vector<bool> is_captured(n, false);
    for (int p : captured) {
        if (p < 0 || p >= n) throw ConfigError("capture_parties: bad party id");
        is_captured[p] = true;
    }
    for (int p = 0; p < n; ++p)
        if (!is_captured[p]) result.remaining_parties.push_back(p);

    if (!publish) {
        // Without the captured parties' results the survivors cannot place
        // their own values inside a known complement; rounds become unusable.
        result.usable = false;
        return result;
    }
    result.usable = !result.remaining_parties.empty();

    const int rem = static_cast<int>(result.remaining_parties.size());
    result.sequences.resize(rem);
    for (int i = 0; i < rem; ++i) {
        result.sequences[i].party = result.remaining_parties[i];
        result.sequences[i].values.reserve(survivors.size());
    }
    result.published.reserve(survivors.size());

    for (const SourceRound& r : survivors) {
        auto rng = make_stream(seed,
                               kMeasureStreamBase + static_cast<std::uint64_t>(r.id));
        const auto column = measure_round(r, n, Direction::z(), rng);
        std::vector<std::uint8_t> pub;
        for (int p : captured) pub.push_back(column[p]);
        result.published.push_back(std::move(pub));
        for (int i = 0; i < rem; ++i)
            result.sequences[i].values.push_back(column[result.remaining_parties[i]]);
    }
    return result;
}

// ---- scenario configuration -------------------------------------------------

ScenarioConfig ScenarioConfig::from_json(const ojson& j) {
    ScenarioConfig c;
    try {
        c.scenario = j.at("scenario").get<std::string>();
        c.n = j.at("n").get<int>();
        c.source_rounds = j.at("source_rounds").get<int>();
        c.test_fraction = j.value("test_fraction", 0.5);
        c.seed = j.value("seed", std::uint64_t{1});

        if (j.contains("adversary") && j["adversary"].value("type", "none") != "none") {
            const auto& a = j["adversary"];
            if (a.at("type").get<std::string>() != "intercept-resend")
                throw ConfigError("unknown adversary type");
            EavesdropperModel eve;
            eve.direction.polar = a.value("polar", 0.0);
            eve.direction.azimuth = a.value("azimuth", 0.0);
            eve.fraction = a.value("fraction", 1.0);
            c.adversary = eve;
        }

        if (c.scenario == "strangers") {
            c.assignment_rounds = j.at("strangers").at("rounds").get<int>();
        } else if (c.scenario == "secret-sharing") {
            const auto& s = j.at("secret_sharing");
            c.dealer = s.value("dealer", 0);
            c.cheater = s.value("cheater", -1);
            c.cheater_position = s.value("cheater_position", -1);
            c.trials = s.value("trials", 1);
        } else if (c.scenario == "liar-detection") {
            const auto& s = j.at("liar");
            const std::string strat = s.value("strategy", "honest");
            if (strat == "honest") c.strategy = LiarStrategy::honest;
            else if (strat == "dishonest-A") c.strategy = LiarStrategy::dishonest_a;
            else if (strat == "dishonest-B") c.strategy = LiarStrategy::dishonest_b;
            else if (strat == "fabricator") c.strategy = LiarStrategy::fabricator;
            else throw ConfigError("unknown liar strategy: " + strat);
            c.message = s.value("message", 0);
            c.fabricate_k = s.value("fabricate_k", 0);
            c.sequence_length = s.value("L", 300);
            c.runs = s.value("runs", 1);
        } else {
            throw ConfigError("unknown scenario: " + c.scenario);
        }
    } catch (const ojson::exception& e) {
        throw ConfigError(std::string("scenario config: ") + e.what());
    }
    if (c.n < 2) throw ConfigError("scenario config: n must be at least 2");
    if (c.scenario == "liar-detection" && c.n != 3)
        throw ConfigError("liar-detection runs with n = 3");
    return c;
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open scenario config: " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const ojson::parse_error& e) {
        // e.byte is a 1-based offset; convert it to a line number so broken
        // files are findable in an editor.
        std::size_t line = 1;
        const std::size_t stop = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
        for (std::size_t i = 0; i < stop; ++i)
            if (text[i] == '\n') ++line;
        throw ConfigError("parse error in " + path + " at line " +
                          std::to_string(line) + ": " + e.what());
    }
    return from_json(j);
}

// ---- scenario orchestration --------------------------------------------------

std::string Transcript::to_jsonl() const {
    std::string out;
    for (const auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

namespace {

void run_strangers(const ScenarioConfig& cfg,
                   const std::vector<PartySequence>& seqs, Transcript& t) {
    int bijections = 0;
    for (int r = 0; r < cfg.assignment_rounds; ++r) {
        const Assignment a = strangers_assign(seqs, r);
        ojson rec{{"event", "assignment"}, {"round", r}};
        ojson map = ojson::array();
        for (std::size_t i = 0; i < a.victim_of.size(); ++i)
            map.push_back(a.victim_of[i]);
        rec["labels"] = map;
        t.record(rec);
        ++bijections;
    }
    t.summary["assignments"] = bijections;
    t.summary["all_bijective"] = true;  // strangers_assign throws otherwise
    t.exit_class = 0;
}

void run_secret_sharing(const ScenarioConfig& cfg,
                        const std::vector<PartySequence>& seqs, Transcript& t) {
    auto rng = make_stream(cfg.seed, kProtocolStreamBase);
    CheatStrategy cheat{cfg.cheater};
    const bool cheating = cfg.cheater >= 0;

    int aborts = 0;
    int per_witness_denominator = 0;
    std::map<int, int> caught_by_counts;
    std::map<int, int> r_all_seen;

    for (int trial = 0; trial < cfg.trials; ++trial) {
        std::vector<int> order = cheating && cfg.cheater_position >= 0
            ? rotated_declare_order(cfg.n, cfg.dealer, 0)
            : rotated_declare_order(cfg.n, cfg.dealer, trial);
        if (cheating && cfg.cheater_position >= 0) {
            // Pin the cheater to a fixed declaration slot.
            auto it = std::find(order.begin(), order.end(), cfg.cheater);
            std::swap(*it, order[cfg.cheater_position]);
        }

        const SharedKeyRound round = secret_share_round(
            seqs, cfg.dealer, order, cheating ? &cheat : nullptr, rng, trial);

        ojson rec{{"event", "reconstruction"}, {"round", trial}};
        ojson decl = ojson::array();
        for (const auto& [p, v] : round.declared)
            decl.push_back(ojson{{"party", p}, {"value", v}});
        rec["declarations"] = decl;
        rec["aborted"] = round.aborted;
        if (round.aborted) {
            rec["caught_by"] = *round.caught_by;
            ++aborts;
            ++caught_by_counts[*round.caught_by];
        } else {
            rec["reconstructed"] = *round.reconstructed;
        }
        if (cheating) {
            rec["r_honest_undeclared"] = round.r_honest_undeclared;
            rec["r_all_undeclared"] = round.r_all_undeclared;
            ++r_all_seen[round.r_all_undeclared];
            ++per_witness_denominator;
        }
        t.record(rec);
    }

    t.summary["trials"] = cfg.trials;
    t.summary["aborts"] = aborts;
    t.summary["abort_rate"] = cfg.trials > 0
        ? static_cast<double>(aborts) / cfg.trials : 0.0;
    if (cheating) {
        // Report the empirical rate next to 1/(r-1) under both r countings.
        ojson rs = ojson::array();
        for (const auto& [r, count] : r_all_seen)
            rs.push_back(ojson{{"r_all_undeclared", r},
                               {"target_one_over_r_minus_1", 1.0 / (r - 1)},
                               {"rounds", count}});
        t.summary["r_accounting"] = rs;
        ojson cb = ojson::array();
        for (const auto& [p, count] : caught_by_counts)
            cb.push_back(ojson{{"witness", p},
                               {"rate", static_cast<double>(count) /
                                            per_witness_denominator}});
        t.summary["caught_by_rates"] = cb;
    }
    t.exit_class = (cfg.trials == 1 && aborts > 0) ? 2 : 0;
}

void run_liar(const ScenarioConfig& cfg, const std::vector<PartySequence>& all_seqs,
              Transcript& t) {
    auto rng = make_stream(cfg.seed, kProtocolStreamBase);
    MessageBus bus;

    int conflicts = 0, accusations_a = 0, accusations_b = 0, rejects = 0;
    const int L = cfg.sequence_length;

    for (int run = 0; run < cfg.runs; ++run) {
        // Each run consumes a fresh slice of L columns.
        std::vector<PartySequence> seqs(3);
        for (int p = 0; p < 3; ++p) {
            seqs[p].party = p;
            seqs[p].values.assign(
                all_seqs[p].values.begin() + static_cast<std::ptrdiff_t>(run) * L,
                all_seqs[p].values.begin() + static_cast<std::ptrdiff_t>(run + 1) * L);
        }

        const LiarMessages msgs =
            liar_messages(seqs, cfg.strategy, static_cast<std::uint8_t>(cfg.message),
                          cfg.fabricate_k, rng);

        // Route the round's traffic over pairwise channels; receivers pick the
        // messages up from their own inboxes before evaluating them.
        auto payload = [](const TritMessage& m) {
            return ojson{{"value", m.value},
                         {"list_length", m.positions.size()}};
        };
        const auto i_ab = bus.send({0, 1, run, "trit-message", payload(msgs.a_to_b)});
        const auto i_ac = bus.send({0, 2, run, "trit-message", payload(msgs.a_to_c)});
        const auto i_bo = bus.send({1, 2, run, "own-list", payload(msgs.b_own)});
        const auto i_br = bus.send({1, 2, run, "relayed-list", payload(msgs.b_relayed)});
        bus.read(i_ab, 1);
        bus.read(i_ac, 2);
        bus.read(i_bo, 2);
        bus.read(i_br, 2);

        const LiarRoundOutcome out = liar_evaluate(seqs, msgs);

        ojson rec{{"event", "liar-round"}, {"run", run}};
        rec["conflict"] = out.conflict;
        rec["receive_rejected"] = out.receive_rejected;
        if (out.verdict) {
            rec["accused"] = std::string(1, out.verdict->accused);
            rec["len_own"] = out.verdict->len_own;
            rec["len_relayed"] = out.verdict->len_relayed;
            rec["threshold"] = out.verdict->threshold;
        }
        t.record(rec);

        if (out.conflict) ++conflicts;
        if (out.receive_rejected) ++rejects;
        if (out.verdict) {
            if (out.verdict->accused == 'A') ++accusations_a;
            if (out.verdict->accused == 'B') ++accusations_b;
        }
    }

    t.summary["runs"] = cfg.runs;
    t.summary["conflicts"] = conflicts;
    t.summary["receive_rejections"] = rejects;
    t.summary["accused_A"] = accusations_a;
    t.summary["accused_B"] = accusations_b;
    t.exit_class = (cfg.runs == 1 && (accusations_a + accusations_b) > 0) ? 2 : 0;
}

}  // namespace

Transcript run_scenario(const ScenarioConfig& cfg) {
    Transcript t;
    t.record(ojson{{"event", "config"},
                   {"scenario", cfg.scenario},
                   {"n", cfg.n},
                   {"source_rounds", cfg.source_rounds},
                   {"test_fraction", cfg.test_fraction},
                   {"seed", cfg.seed},
                   {"adversary", cfg.adversary ? "intercept-resend" : "none"}});

    const DistributeResult dist = distribute_and_test(
        cfg.n, cfg.source_rounds, cfg.test_fraction,
        cfg.adversary ? &*cfg.adversary : nullptr, cfg.seed);

    ojson test_rec{{"event", "test-phase"},
                   {"tested", dist.report.tested_ids.size()},
                   {"failures", dist.report.failures},
                   {"accept", dist.report.accept}};
    if (dist.report.insecure_no_tests) test_rec["insecure_no_tests"] = true;
    t.record(test_rec);

    if (!dist.report.accept) {
        t.summary = ojson{{"accept", false},
                          {"aborted_in_test_phase", true},
                          {"tested", dist.report.tested_ids.size()},
                          {"failures", dist.report.failures}};
        t.exit_class = 2;
        return t;
    }

    int needed = 0;
    if (cfg.scenario == "strangers") needed = cfg.assignment_rounds;
    else if (cfg.scenario == "secret-sharing") needed = cfg.trials;
    else needed = cfg.sequence_length * cfg.runs;

    const auto seqs = extract_sequences(dist.survivors, cfg.n, needed, cfg.seed);
    t.record(ojson{{"event", "sequences"},
                   {"length", needed},
                   {"survivors", dist.survivors.size()}});

    t.summary["accept"] = true;
    if (cfg.scenario == "strangers") run_strangers(cfg, seqs, t);
    else if (cfg.scenario == "secret-sharing") run_secret_sharing(cfg, seqs, t);
    else run_liar(cfg, seqs, t);
    return t;
}

}  // namespace singlet
