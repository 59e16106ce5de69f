#include "thzqkd/protocol.hpp"

#include <stdexcept>

namespace thzqkd {

void ProtocolParams::validate() const {
  if (!(v0 >= 1.0)) throw std::domain_error("ProtocolParams: v0 must be >= 1 SNU");
  if (!(va >= 0.0)) throw std::domain_error("ProtocolParams: va must be >= 0");
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
    throw std::domain_error("ProtocolParams: transmissivity outside [0, 1]");
  }
  if (!(attack_noise >= 1.0)) throw std::domain_error("ProtocolParams: attack_noise must be >= 1 SNU");
  if (!(eta > 0.0 && eta <= 1.0)) throw std::domain_error("ProtocolParams: eta outside (0, 1]");
  if (!(trusted_noise >= 1.0)) throw std::domain_error("ProtocolParams: trusted_noise must be >= 1 SNU");
}

}  // namespace thzqkd
