#include "qcw/session.hpp"

#include "qcw/errors.hpp"

namespace qcw {

void SessionLog::record(char sender, const std::string& msg_type,
                        const Bytes& payload) {
    if (sender != 'A' && sender != 'B' && sender != 'E')
        throw ParameterError("sender must be A, B, or E");
    if (msg_type.empty()) throw ParameterError("empty message type");
    records_.push_back({records_.size(), sender, msg_type, to_hex(payload)});
}

}  // namespace qcw
