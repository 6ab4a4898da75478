#include "qcw/qchannel.hpp"

#include <algorithm>
#include <set>

#include "qcw/errors.hpp"

namespace qcw {

#ifdef QCW_TESTING
QubitInspection inspect_qubit(const StoredQubit& q) {
    return QubitInspection{q.bit_, q.basis_, q.consumed_};
}
#endif

std::vector<StoredQubit> send_bb84(const Bits& x, const Bits& theta,
                                   ChannelConfig cfg, Rng& rng) {
    if (x.size() != theta.size())
        throw ParameterError("send_bb84: data and basis lengths differ");
    if (cfg.phi < 0.0 || cfg.phi > 1.0)
        throw ParameterError("send_bb84: noise rate outside [0, 1]");
    std::vector<StoredQubit> qubits(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        uint8_t bit = x[i] & 1;
        if (cfg.phi > 0.0 && rng.unit() < cfg.phi) bit ^= 1;
        qubits[i].bit_ = bit;
        qubits[i].basis_ = theta[i] & 1;
    }
    return qubits;
}

uint8_t measure(StoredQubit& q, uint8_t basis, Rng& rng) {
    if (q.consumed_)
        throw UsageError("measure: qubit already measured");
    q.consumed_ = true;
    if ((basis & 1) == q.basis_) return q.bit_;
    return rng.bit();
}

std::pair<Bits, Bits> receiver_honest(std::vector<StoredQubit>& qubits, Rng& rng) {
    Bits theta_hat(qubits.size()), x_hat(qubits.size());
    for (size_t i = 0; i < qubits.size(); ++i) {
        theta_hat[i] = rng.bit();
        x_hat[i] = measure(qubits[i], theta_hat[i], rng);
    }
    return {theta_hat, x_hat};
}

StorageView receiver_bounded_storage(std::vector<StoredQubit>& qubits,
                                     double gamma,
                                     const std::function<Bits()>& announce_theta,
                                     Rng& rng, const Bits& strategy_bases,
                                     const std::vector<size_t>& preferred_store) {
    const size_t n = qubits.size();
    if (gamma < 0.0 || gamma > 1.0)
        throw ParameterError("receiver_bounded_storage: gamma outside [0, 1]");
    size_t budget = static_cast<size_t>(gamma * static_cast<double>(n) + 1e-9);

    std::set<size_t> store;
    for (size_t idx : preferred_store) {
        if (idx >= n)
            throw ParameterError("receiver_bounded_storage: preferred position out of range");
        if (!store.insert(idx).second)
            throw ParameterError("receiver_bounded_storage: duplicate preferred position");
    }
    if (store.size() > budget)
        throw ParameterError("receiver_bounded_storage: preferred positions exceed the memory budget");
    while (store.size() < budget) store.insert(rng.below(n));

    StorageView view;
    view.strategy_bases = strategy_bases.empty() ? rng.bit_string(n) : strategy_bases;
    if (view.strategy_bases.size() != n)
        throw ParameterError("receiver_bounded_storage: strategy basis length mismatch");
    view.stored.assign(store.begin(), store.end());
    view.positions.resize(n);

    // everything outside the memory budget is measured before theta exists
    for (size_t i = 0; i < n; ++i) {
        view.positions[i].index = i;
        if (store.count(i)) continue;
        view.positions[i].value = measure(qubits[i], view.strategy_bases[i], rng);
    }

    Bits theta = announce_theta();
    if (theta.size() != n)
        throw ParameterError("receiver_bounded_storage: announced basis length mismatch");

    for (size_t i = 0; i < n; ++i) {
        auto& pos = view.positions[i];
        if (store.count(i)) {
            pos.value = measure(qubits[i], theta[i], rng);
            pos.known = true;
            pos.source = StorageSource::stored;
        } else if (view.strategy_bases[i] == (theta[i] & 1)) {
            pos.known = true;
            pos.source = StorageSource::matched;
        } else {
            pos.known = false;
            pos.source = StorageSource::mismatched;
        }
    }
    return view;
}

SamplingCheck sampling_estimate_check(const Bits& x, const Bits& x_hat,
                                      const Bits& theta, const Bits& theta_hat,
                                      const std::vector<size_t>& test_set) {
    const size_t n = x.size();
    if (x_hat.size() != n || theta.size() != n || theta_hat.size() != n)
        throw ParameterError("sampling_estimate_check: length mismatch");
    std::set<size_t> test;
    for (size_t idx : test_set) {
        if (idx >= n)
            throw ParameterError("sampling_estimate_check: test position out of range");
        if (!test.insert(idx).second)
            throw ParameterError("sampling_estimate_check: duplicate test position");
    }

    size_t test_n = 0, test_e = 0, rest_n = 0, rest_e = 0;
    for (size_t i = 0; i < n; ++i) {
        if (theta[i] != theta_hat[i]) continue;  // only matching bases compare
        if (test.count(i)) {
            ++test_n;
            test_e += x[i] != x_hat[i];
        } else {
            ++rest_n;
            rest_e += x[i] != x_hat[i];
        }
    }

    SamplingCheck r;
    r.degenerate_test = test_n == 0;
    r.degenerate_remainder = rest_n == 0;
    r.test_err = test_n ? static_cast<double>(test_e) / test_n : 0.0;
    r.remainder_err = rest_n ? static_cast<double>(rest_e) / rest_n : 0.0;
    return r;
}

}  // namespace qcw
