#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "qcw/coinflip.hpp"
#include "qcw/mixedcommit.hpp"
#include "qcw/rng.hpp"
#include "qcw/session.hpp"

namespace qcw {

// Directed graph as a row-major adjacency matrix with an empty diagonal.
struct Graph {
    size_t vertices = 0;
    std::vector<uint8_t> adj;  // vertices^2 entries, adj[r*vertices+c]

    uint8_t at(size_t r, size_t c) const { return adj[r * vertices + c]; }
    void set(size_t r, size_t c, uint8_t bit) { adj[r * vertices + c] = bit; }
    bool operator==(const Graph&) const = default;
};

// A candidate witness: the visiting order of a directed Hamiltonian cycle.
using Cycle = std::vector<size_t>;

// Direct definition check: a permutation of all vertices whose consecutive
// pairs (wrapping around) are all edges.
bool is_valid_cycle(const Graph& g, const Cycle& cycle);

std::vector<size_t> random_permutation(size_t n, Rng& rng);
std::vector<size_t> inverse_permutation(const std::vector<size_t>& perm);

// Relabeled copy: h[perm[u]][perm[w]] = g[u][w].
Graph permuted_graph(const Graph& g, const std::vector<size_t>& perm);

// Backtracking search, feasible for the workbench-sized graphs.
std::optional<Cycle> find_ham_cycle(const Graph& g);

// A graph with a planted cycle plus each remaining arc with the given
// probability; returns the graph and the planted witness.
std::pair<Graph, Cycle> random_ham_graph(size_t v, double extra_edge_prob,
                                         Rng& rng);

Bytes graph_bytes(const Graph& g);

struct OpenedBit {
    size_t position = 0;
    uint8_t bit = 0;
    bool operator==(const OpenedBit&) const = default;
};
using OpenedBits = std::vector<OpenedBit>;

// The committed string plus the prover's opening plan for 1-challenges:
// per repetition, the matrix positions holding the relabeled cycle.
struct WitnessEncoding {
    Bits bits;
    std::vector<std::vector<size_t>> cycle_positions;
};

// One parallel-repetition encoding scheme. The selector takes the encoding
// because a 1-challenge reveals positions chosen by the encoder's
// randomness; the judge and simulator see only challenge-determined data.
struct WitnessEncodingScheme {
    size_t sigma = 1;
    std::function<size_t(const Graph&)> length;
    std::function<std::optional<WitnessEncoding>(const Graph&, const Cycle&,
                                                 Rng&)>
        encode;
    std::function<std::optional<Cycle>(const Graph&, const Bits&)> decode;
    std::function<std::vector<size_t>(const Bits& challenge,
                                      const WitnessEncoding&)>
        select;
    std::function<bool(const Graph&, const Bits& challenge, const OpenedBits&)>
        judge;
    std::function<OpenedBits(const Graph&, const Bits& challenge, Rng&)>
        simulate;
    // One-challenge-answerable encoding for the guessed challenge string.
    std::function<WitnessEncoding(const Graph&, const Bits& guess, Rng&)>
        cheat_encode;
};

// Per repetition: the relabeling as fixed-width 8-bit indices, then the
// relabeled adjacency matrix row-major. A 0-challenge opens the whole
// repetition, a 1-challenge opens the v matrix positions of the relabeled
// cycle.
WitnessEncodingScheme ham_encoding(size_t sigma);

size_t ham_repetition_bits(const Graph& g);

// Deterministic cores with enumerable randomness: the per-repetition
// relabelings for the encoder, and per challenge bit either a relabeling
// (0) or a visiting order (1) for the simulator.
WitnessEncoding ham_encode_with(const Graph& g, const Cycle& witness,
                                const std::vector<std::vector<size_t>>& perms);
OpenedBits ham_simulate_with(const Graph& g, const Bits& challenge,
                             const std::vector<std::vector<size_t>>& choices);

enum class ZkpkVerdict { success, rejected, bad_opening, refused, coin_abort };

enum class ZkpkProver { honest, guess_cheat, corrupt_opening };

struct ZkpkConfig {
    size_t kappa = 32;        // key-flip width
    LweParams params;         // shape of the derived commitment key
    CoinProtocolConfig base;  // settings for the underlying flips
    std::optional<CommitKey> key_override;  // substituted by an extractor
};

struct ZkpkResult {
    ZkpkVerdict verdict = ZkpkVerdict::coin_abort;
    Bits challenge;
    std::vector<LweCommitment> commitments;
    std::vector<size_t> opened_positions;
};

// Key flip, position-wise commitments to the encoding, challenge flip,
// openings on the selected positions, verifier judgment.
ZkpkResult zkpk_run(const WitnessEncodingScheme& scheme, const Graph& x,
                    const std::optional<Cycle>& witness, ZkpkProver prover,
                    const ZkpkConfig& cfg, SessionLog& session, Rng& alice_rng,
                    Rng& bob_rng);

// Decodes the committed encoding through the extraction key.
std::optional<Cycle> extract_witness(const WitnessEncodingScheme& scheme,
                                     const Graph& x, const CommitKey& key,
                                     const std::vector<LweCommitment>& coms);

// Injected non-interactive proof system over a common reference string.
struct NizkSystem {
    std::function<Bytes(const Bits& omega, const Bytes& statement, Rng&)> prove;
    std::function<bool(const Bits& omega, const Bytes& statement,
                       const Bytes& proof)>
        verify;
};

// Test double for a toy membership language (statements whose bytes xor to
// zero). Complete and sound by construction; not zero-knowledge.
NizkSystem parity_nizk_double();

struct IqzkResult {
    bool accepted = false;
    bool coin_aborted = false;
    Bits omega;
};

// Flip the reference string, then run the injected proof over it.
IqzkResult iqzk_run(const Bytes& statement, const NizkSystem& nizk,
                    size_t kappa, const CoinProtocolConfig& base,
                    const CommitterPlan& alice_plan, SessionLog& session,
                    Rng& alice_rng, Rng& bob_rng);

}  // namespace qcw
