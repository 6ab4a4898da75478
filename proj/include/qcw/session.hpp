#pragma once

#include <string>
#include <vector>

#include "qcw/bits.hpp"

namespace qcw {

struct TranscriptRecord {
    size_t round = 0;
    char sender = 'A';  // A, B, or E
    std::string msg_type;
    std::string payload_hex;
    bool operator==(const TranscriptRecord&) const = default;
};

using Transcript = std::vector<TranscriptRecord>;

// Ordered message log shared by both parties of a protocol run. Rounds are
// assigned contiguously from 0 in recording order.
class SessionLog {
  public:
    void record(char sender, const std::string& msg_type, const Bytes& payload);
    const Transcript& transcript() const { return records_; }

  private:
    Transcript records_;
};

}  // namespace qcw
