#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qcw/hashing.hpp"
#include "qcw/mixedcommit.hpp"
#include "qcw/qchannel.hpp"
#include "qcw/rng.hpp"
#include "qcw/session.hpp"

namespace qcw {

enum class ReceiverStrategy {
    honest,               // measure every qubit in a fresh uniform basis
    delayed_measurement,  // skip measuring, fabricate basis and value claims
};

// Hook between transmission and the receiver's action; gets the in-flight
// qubits and its own randomness.
using EveTap = std::function<void(std::vector<StoredQubit>&, Rng&)>;

struct Bb84Run {
    size_t m = 0;
    Bits x, theta;          // sender side, length m
    Bits theta_hat, x_hat;  // receiver claims, length m
    std::vector<size_t> surviving;  // all of [0,m) until verification shrinks it
};

Bb84Run run_bb84_preparation(size_t m, const ChannelConfig& channel,
                             ReceiverStrategy strategy, Rng& alice_rng,
                             Rng& bob_rng, const EveTap& eve = {},
                             Rng* eve_rng = nullptr);

// Measures each qubit with probability `fraction` in the given basis and
// forwards a fresh noiseless qubit carrying the observed value.
void eve_measure_fraction(std::vector<StoredQubit>& qubits, double fraction,
                          uint8_t basis, Rng& rng);

struct CompilerConfig {
    double alpha = 0.5;      // test fraction, 0 < alpha < 1
    double phi_prime = 0.0;  // acceptance threshold, in [0, 1/2)
    CommitKey key;
};

double default_phi_prime(double phi);  // phi + 0.03

enum class CompileStatus { accepted, bad_opening, error_rate };

enum class OpenBehavior {
    honest,
    corrupt_first,  // flip the bit inside the first value opening
};

struct TestRecord {
    size_t index = 0;
    LweCommitment c_theta, c_x;
    LweOpening o_theta, o_x;
};

struct CompileResult {
    CompileStatus status = CompileStatus::accepted;
    Bb84Run run;  // surviving = complement of the test set when accepted
    std::vector<size_t> test_set;
    std::vector<TestRecord> test_records;
    double test_error = 0;
};

// Commit-and-open verification: the receiver commits to every (basis, value)
// pair, only then the sender draws the test set, and the opened positions
// must verify and show a matching-basis error rate at most phi_prime.
CompileResult compile_verification(const Bb84Run& run, const CompilerConfig& cfg,
                                   SessionLog& session, Rng& alice_rng,
                                   Rng& bob_rng,
                                   OpenBehavior behavior = OpenBehavior::honest);

// Throws SessionError unless every commitments round precedes every
// test-subset round in the transcript.
void check_commit_before_test(const Transcript& transcript);

Bytes serialize_test_records(const std::vector<TestRecord>& records);

struct OtInputs {
    Bits s0, s1;        // both of length ot_secret_bits(run, lambda)
    uint8_t k = 0;      // receiver choice
    double lambda = 0.1;
};

size_t ot_secret_bits(const Bb84Run& run, double lambda);

enum class OtStatus { ok, short_set };

struct OtResult {
    OtStatus status = OtStatus::ok;
    Bits output;                 // receiver's s_k on ok
    std::vector<size_t> i0, i1;  // announced partition, survivor-relative
};

// Sender announces bases, receiver partitions into the matching and the
// complementary subset (labeled by the choice bit), sender masks each secret
// with a fresh hash of her string on that subset.
OtResult ot_postprocess(const Bb84Run& run, const OtInputs& inputs,
                        SessionLog& session, Rng& alice_rng);

// Bit p of the result is set iff probes[p] is in the set.
uint64_t membership_projection(const std::vector<size_t>& set,
                               const std::vector<size_t>& probes);

struct BqsmAttackOutcome {
    bool known_secret_correct = false;
    bool other_secret_correct = false;
};

// Storage-bounded receiver against plain OT: stores floor(gamma*n) qubits,
// measures the rest immediately in uniform bases, routes every position it
// failed to learn into one subset, and guesses the secret masked there.
BqsmAttackOutcome ot_bounded_storage_attack(size_t n, double lambda,
                                            double gamma,
                                            const ChannelConfig& channel,
                                            Rng& alice_rng, Rng& bob_rng);

struct IdCode {
    size_t n = 0;
    size_t min_distance = 0;
    std::vector<Bits> codewords;  // one basis string per password
};

// Rejection-samples uniform codewords until `count` of them are pairwise at
// Hamming distance >= min_distance. count <= 256.
IdCode make_id_code(size_t count, size_t n, size_t min_distance, Rng& rng);

size_t nearest_codeword(const IdCode& code, const Bits& bases);

struct IdOutcome {
    bool accept = false;
    Bits z;
};

// Password-authenticated comparison: the receiver masks his bases with his
// password's codeword, the sender answers with a hash of her string on the
// positions where her password says the bases agree, blinded by a hash of
// the password itself.
IdOutcome id_run(const Bb84Run& run, const IdCode& code, size_t w_alice,
                 size_t w_bob, size_t ell, SessionLog& session, Rng& alice_rng,
                 Rng& bob_rng);

struct IdPlusKeys {
    Bits mac_key;           // shared high-entropy authentication key
    uint64_t j = 0;         // syndrome matrix index
    size_t n_prime = 16;    // syndrome block length, <= 24
    double phi_dprime = 0.1;  // correctable error fraction of the block
    size_t tag_bits = 16;
};

// Affine hash tag: a key-expanded binary matrix and offset applied to the
// message; matrix layout depends on the key and the message length only.
Bits mac_tag(const Bits& key, const Bytes& message, size_t tag_bits);

// ceil(3*n_prime/4) parity bits of the block under matrix j.
Bits syndrome_bits(uint64_t j, size_t n_prime, const Bits& block);

// Bounded-distance decoding: the unique-by-search block within
// ceil(phi_dprime*n_prime) flips of noisy_block matching the syndrome.
std::optional<Bits> syndrome_correct(uint64_t j, size_t n_prime,
                                     double radius_frac, const Bits& noisy_block,
                                     const Bits& syn);

enum class IdPlusStatus { accept, reject, mac_reject, decode_failure };

struct IdPlusOutcome {
    IdPlusStatus status = IdPlusStatus::reject;
};

// Flips one bit in the recipient's copy of one wire message. Message order:
// 0 basis-shift (B), 1 bases (A), 2 hash-f (A), 3 hash-g (B),
// 4 syndrome-index (A), 5 syndrome (A), 6 response (A), 7 tag (A).
struct EveFlip {
    size_t message_index = 0;
    size_t bit_index = 0;
};

constexpr size_t kIdPlusMessageCount = 8;

// Identification with tamper detection on a compiled run: the sender also
// transmits a syndrome of her string so the receiver can error-correct his
// copy, plus a tag over every classical message, the test-set openings, and
// the string itself. Unparseable messages count as mac-reject.
IdPlusOutcome id_plus_run(const CompileResult& cr, const IdCode& code,
                          size_t w_alice, size_t w_bob, const IdPlusKeys& keys,
                          size_t ell, SessionLog& session, Rng& alice_rng,
                          Rng& bob_rng,
                          const std::optional<EveFlip>& flip = {});

}  // namespace qcw
