#pragma once

#include <functional>
#include <optional>

#include "qcw/mixedcommit.hpp"
#include "qcw/rng.hpp"
#include "qcw/session.hpp"
#include "qcw/ssscommit.hpp"

namespace qcw {

// Per-side security claims, checked by the test batteries rather than
// self-certifying: uncont = cannot steer the outcome into a negligible set,
// random = cannot bias away from uniform, force = a simulator can enforce
// any target.
enum class CoinFlavor { uncont, random, force };

struct FlavorPair {
    CoinFlavor alice_side = CoinFlavor::uncont;
    CoinFlavor bob_side = CoinFlavor::uncont;
};

struct CoinOutcome {
    bool aborted = false;
    Bits value;  // lambda bits when not aborted
};

// Ideal coin: a uniform string goes to Alice first, then her second input
// decides whether Bob sees the string or an abort.
class IdealCoinFunc {
public:
    explicit IdealCoinFunc(size_t lambda);
    const Bits& start(Rng& rng);
    CoinOutcome finish(bool deliver);
    size_t lambda() const { return lambda_; }

private:
    size_t lambda_;
    std::optional<Bits> pending_;
};

enum class CoinRole { alice_commits, bob_commits };

// Committer decision per round: true opens honestly, false refuses.
using CommitterPlan = std::function<bool(size_t round)>;
CommitterPlan honest_committer();
CommitterPlan refuse_from(size_t round);

// Classical responder; rewinding re-invokes it on a fresh commitment while
// its randomness keeps advancing.
using ResponderStrategy = std::function<uint8_t(const Bytes& commitment, Rng&)>;
ResponderStrategy honest_responder();
ResponderStrategy constant_responder(uint8_t bit);

struct CoinProtocolConfig {
    size_t naor_n = 32;                // seed length; the salt is 3x longer
    std::optional<CommitKey> lwe_key;  // commit with the keyed scheme instead
    CoinRole role = CoinRole::alice_commits;
};

// One round: responder salt (seed-based scheme only), commitment, response
// bit, opening. Only the committer can abort once the response is on the
// wire; the responder's sole failure mode is rejecting a bad opening.
CoinOutcome coin_single(const CoinProtocolConfig& cfg,
                        const CommitterPlan& committer,
                        const ResponderStrategy& responder, SessionLog& session,
                        Rng& alice_rng, Rng& bob_rng);

// ell rounds back to back; any abort swallows the whole string.
CoinOutcome coin_sequential(size_t ell, const CoinProtocolConfig& cfg,
                            const CommitterPlan& committer,
                            const ResponderStrategy& responder,
                            SessionLog& session, Rng& alice_rng, Rng& bob_rng);

struct EnforceCoinReport {
    CoinOutcome outcome;
    bool hit_target = false;
    bool enforcement_failure = false;  // accepted opening disagreed with the
                                       // extraction; reported, outcome aborts
    size_t attempts = 0;               // responder invocations across all bits
};

// Per target bit: guess the response, commit to target^guess, rewind the
// responder on a mismatch and retry with the observed response as the next
// guess. Exhausting max_retries aborts the run.
EnforceCoinReport enforce_against_bob(const Bits& target,
                                      const ResponderStrategy& responder,
                                      size_t max_retries,
                                      const CoinProtocolConfig& cfg,
                                      SessionLog& session, Rng& sim_rng,
                                      Rng& bob_rng);

// Extraction-based: the committer runs under a binding key, the simulator
// decodes her bit and answers target^bit. Outcome is the target or an abort.
EnforceCoinReport enforce_against_alice(const Bits& target,
                                        const CommitterPlan& committer,
                                        const CommitKey& binding_key,
                                        SessionLog& session, Rng& alice_rng,
                                        Rng& sim_rng);

// Expands a flipped string into a uniform (A, b) key of the given shape.
// Deterministic in the coin; the result carries no secret.
CommitKey key_from_coin(const Bits& coin, const LweParams& params);

// (serialized commitments, width, rng) -> response string
using StringResponder =
    std::function<Bits(const Bytes& commitments, size_t ell, Rng&)>;
StringResponder honest_string_responder();
StringResponder constant_string_responder(const Bits& value);

struct ForceRandomConfig {
    size_t kappa = 256;       // key-flip width
    size_t ell = 4;           // outcome width
    LweParams params;         // shape of the derived commitment key
    CoinProtocolConfig base;  // settings for the underlying single flips
};

// Key flip with swapped roles, then a keyed string commitment from Alice,
// Bob's response, and the opening; outcome a ^ b.
CoinOutcome amplify_force_random(const ForceRandomConfig& cfg,
                                 const CommitterPlan& alice,
                                 const StringResponder& bob,
                                 SessionLog& session, Rng& alice_rng,
                                 Rng& bob_rng);

// Substitutes a binding key for the derived one, extracts Alice's string,
// and answers target^string.
EnforceCoinReport enforce_force_random_against_alice(
    const ForceRandomConfig& cfg, const Bits& target,
    const CommitterPlan& alice, SessionLog& session, Rng& alice_rng,
    Rng& sim_rng);

uint64_t binomial_count(size_t n, size_t k);

// Lexicographic position of a sorted k-subset of {0..n-1}, and its inverse.
uint64_t subset_rank(const std::vector<size_t>& subset, size_t n);
std::vector<size_t> subset_unrank(uint64_t rank, size_t n, size_t k);

// First ell bits of the message symbols, each spelled little-endian over
// kappa bits; requires ell <= sigma*kappa.
Bits pack_message(const std::vector<FieldElem>& message, size_t ell);
std::vector<FieldElem> unpack_message(const Bits& value,
                                      const SssParams& params);

struct ForceForceConfig {
    size_t kappa = 64;        // key-flip width
    SssParams sss{4, 8};
    size_t ell = 4;           // outcome width, <= sigma*kappa of the field
    LweParams params;         // shape of the derived commitment key
    CoinProtocolConfig base;  // settings for the underlying single flips
    size_t max_retries = 64;  // challenge-flip enforcement budget per bit
};

// Key flip, share commitments to a random message, Bob's response, the
// announced shares with a degree check, a ranked-subset challenge flip, and
// openings on the challenge; outcome pack(message) ^ b.
CoinOutcome amplify_force_force(const ForceForceConfig& cfg,
                                SessionLog& session, Rng& alice_rng,
                                Rng& bob_rng);

enum class AliceForceForceBehavior {
    honest,
    divergent,  // commits between two codewords, announces the far one
};

// Binding-key substitution plus share extraction; the response embeds the
// target against the decoded message. An accepted opening that disagrees
// with the extraction is reported as an enforcement failure and aborts.
EnforceCoinReport enforce_force_force_against_alice(
    const ForceForceConfig& cfg, const Bits& target,
    AliceForceForceBehavior alice, SessionLog& session, Rng& alice_rng,
    Rng& sim_rng);

// Honest key flip, commitments to a placeholder, then a trapdoor opening
// toward target^b with the challenge flip rewound onto the prepared subset.
EnforceCoinReport enforce_force_force_against_bob(
    const ForceForceConfig& cfg, const Bits& target, const StringResponder& bob,
    const ResponderStrategy& bob_coin, SessionLog& session, Rng& sim_rng,
    Rng& bob_rng);

}  // namespace qcw
