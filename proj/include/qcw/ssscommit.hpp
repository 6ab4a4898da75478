#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qcw/fieldmath.hpp"
#include "qcw/mixedcommit.hpp"
#include "qcw/rng.hpp"

namespace qcw {

// sigma message symbols over GF(2^kappa), shared into 4*sigma evaluation
// points of a degree <= 2*sigma-1 polynomial. Needs 2^kappa > 5*sigma.
struct SssParams {
    int sigma = 0;
    int kappa = 0;
    bool operator==(const SssParams&) const = default;
    size_t n_shares() const { return static_cast<size_t>(4 * sigma); }
};

struct ShareVector {
    SssParams params;
    std::vector<FieldElem> shares;      // f(enc(1)) .. f(enc(4*sigma))
    std::vector<FieldElem> message;     // message[j] = f(enc(-j))
    std::vector<FieldElem> randomizer;  // equals the first sigma shares
};

// The interpolating polynomial carries message[j] at enc(-j) and s[j] at
// enc(j+1), so the randomizer reappears verbatim as the leading shares.
ShareVector sss_share(const std::vector<FieldElem>& m,
                      const std::vector<FieldElem>& s);

// Plain reconstruction from at least 2*sigma labeled shares (0-based share
// indices). Extra points must agree with the interpolated polynomial;
// otherwise nullopt. No error correction here.
std::optional<std::vector<FieldElem>> sss_reconstruct(
    const SssParams& params,
    const std::vector<std::pair<size_t, FieldElem>>& points);

// True iff a full vector of 4*sigma values lies on one degree <= 2*sigma-1
// polynomial.
bool shares_consistent(const SssParams& params,
                       const std::vector<FieldElem>& shares);

std::vector<FieldElem> message_from_shares(const SssParams& params,
                                           const std::vector<FieldElem>& shares);

// One bit commitment per share bit, low bit first.
struct SssCommitment {
    SssParams params;
    std::vector<std::vector<LweCommitment>> per_share;  // 4*sigma by kappa
};

using ShareOpenings = std::vector<std::vector<LweOpening>>;

struct SssCommitResult {
    SssCommitment com;
    ShareVector shares;
    ShareOpenings openings;
};

std::pair<SssCommitment, ShareOpenings> commit_shares(
    const CommitKey& key, const std::vector<FieldElem>& shares,
    const SssParams& params, Rng& rng);

// Fresh uniform randomizer, then share-and-commit.
SssCommitResult commit_phase(const CommitKey& key,
                             const std::vector<FieldElem>& m, Rng& rng);

// sigma distinct share indices the verifier asks to see opened.
struct Challenge {
    std::vector<size_t> subset;
};

Challenge sample_challenge(const SssParams& params, Rng& rng);

ShareOpenings openings_for_challenge(const ShareOpenings& all,
                                     const Challenge& challenge);

enum class OpenStatus { ok, inconsistent_shares, bad_opening };

struct OpenOutcome {
    OpenStatus status = OpenStatus::bad_opening;
    std::vector<FieldElem> message;  // filled only on ok
};

// Verifier side: degree check on the announced shares first, then the bit
// openings on the challenged positions against both the commitments and the
// announced values.
OpenOutcome open_phase(const CommitKey& key, const SssCommitment& com,
                       const std::vector<FieldElem>& sent_shares,
                       const Challenge& challenge,
                       const ShareOpenings& openings_on_challenge);

struct ExtractResult {
    std::vector<FieldElem> message;
    std::vector<FieldElem> codeword;  // nearest consistent share vector found
    size_t distance = 0;              // positions where the extraction differs
    bool flagged = false;             // tie or search radius exceeded
};

// Binding keys only. Decodes the extracted share values to the nearest
// codeword: exhaustive over 2*sigma-subsets for sigma <= 4, a solver with
// error budget up to sigma-1 above that. When the search fails, falls back
// to the polynomial through the first 2*sigma positions and flags the result.
ExtractResult extract_commitment(const CommitKey& key, const SssCommitment& com);

struct OpenTranscript {
    std::vector<FieldElem> sent_shares;
    Challenge challenge;
    ShareOpenings openings;
};

OpenTranscript honest_open_transcript(const SssCommitResult& cr,
                                      const Challenge& challenge);

// Equivocation helper: interpolate through the sigma challenged committed
// shares plus the target message points, announce that polynomial, and reuse
// the recorded openings. With target equal to the committed message, the
// output is byte-identical to the honest transcript.
OpenTranscript trapdoor_open(const CommitKey& key, const SssCommitResult& cr,
                             const std::vector<FieldElem>& target,
                             const Challenge& challenge);

Bytes transcript_bytes(const OpenTranscript& t);

// Two codewords at distance exactly 2*sigma+1 plus a midpoint vector sitting
// sigma from `near` and sigma+1 from `far`. Cheating fixtures for binding
// experiments.
struct DivergentSharePair {
    ShareVector near;
    ShareVector far;
    std::vector<FieldElem> midpoint;
};

DivergentSharePair make_divergent_pair(const SssParams& params,
                                       const std::vector<FieldElem>& m, Rng& rng);

}  // namespace qcw
