#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "qcw/bits.hpp"
#include "qcw/rng.hpp"

namespace qcw {

struct ChannelConfig {
    double phi = 0.0;  // bit-flip rate applied once, at transmission
};

#ifdef QCW_TESTING
struct QubitInspection {
    uint8_t bit;
    uint8_t basis;
    bool consumed;
};
#endif

// A conjugate-coded bit in transit. State is private on purpose: the only
// production operations are transmission and a one-shot measurement.
class StoredQubit {
public:
    StoredQubit() = default;

private:
    uint8_t bit_ = 0;    // value after channel noise, in basis basis_
    uint8_t basis_ = 0;  // 0 rectilinear, 1 diagonal
    bool consumed_ = false;

    friend std::vector<StoredQubit> send_bb84(const Bits&, const Bits&,
                                              ChannelConfig, Rng&);
    friend uint8_t measure(StoredQubit&, uint8_t, Rng&);
#ifdef QCW_TESTING
    friend QubitInspection inspect_qubit(const StoredQubit&);
#endif
};

#ifdef QCW_TESTING
QubitInspection inspect_qubit(const StoredQubit& q);
#endif

std::vector<StoredQubit> send_bb84(const Bits& x, const Bits& theta,
                                   ChannelConfig cfg, Rng& rng);

// Matching basis returns the stored bit; the wrong basis returns a fresh
// uniform bit. Consumes the qubit; measuring twice is a usage error.
uint8_t measure(StoredQubit& q, uint8_t basis, Rng& rng);

// Measures every qubit in a fresh uniform basis. Returns (theta_hat, x_hat).
std::pair<Bits, Bits> receiver_honest(std::vector<StoredQubit>& qubits, Rng& rng);

enum class StorageSource {
    stored,      // kept in memory, measured in the announced basis
    matched,     // measured immediately, strategy basis happened to match
    mismatched,  // measured immediately in the wrong basis
};

struct StoragePosition {
    size_t index = 0;
    uint8_t value = 0;
    bool known = false;  // certain of the transmitted bit (up to channel noise)
    StorageSource source = StorageSource::mismatched;
};

struct StorageView {
    std::vector<StoragePosition> positions;  // one entry per qubit, in order
    Bits strategy_bases;
    std::vector<size_t> stored;
};

// Memory-bounded receiver: keeps floor(gamma*n) qubits, measures the rest in
// the strategy bases (uniform when empty) right away, and only then asks for
// the transmission bases via announce_theta. Stored qubits are read out in
// the announced bases. preferred_store pins which positions go to memory.
StorageView receiver_bounded_storage(std::vector<StoredQubit>& qubits,
                                     double gamma,
                                     const std::function<Bits()>& announce_theta,
                                     Rng& rng, const Bits& strategy_bases = {},
                                     const std::vector<size_t>& preferred_store = {});

struct SamplingCheck {
    double test_err = 0;       // error rate on matching-basis test positions
    double remainder_err = 0;  // error rate on matching-basis remaining positions
    bool degenerate_test = false;
    bool degenerate_remainder = false;
};

SamplingCheck sampling_estimate_check(const Bits& x, const Bits& x_hat,
                                      const Bits& theta, const Bits& theta_hat,
                                      const std::vector<size_t>& test_set);

}  // namespace qcw
