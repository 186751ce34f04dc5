#include "twinslice/net/stack.hpp"

namespace twinslice {

StackProfile
StackProfile::zero()
{
  StackProfile p;
  p.alp = p.mqtt = p.tls = p.quic = p.udp = p.ipv6 = p.phy = 0;
  p.tlsHandshakeRtts = p.quicHandshakeRtts = 0;
  return p;
}

std::uint64_t
StackProfile::overheadBytes() const
{
  return std::uint64_t{alp} + mqtt + tls + transportOverhead() + ipv6 + phy;
}

std::uint32_t
StackProfile::handshakeRtts() const
{
  return tlsHandshakeRtts + (transport == Transport::Quic ? quicHandshakeRtts : 0);
}

SimTime
StackProfile::setupLatency(SimTime rtt) const
{
  if (fixedSetupLatency)
    return *fixedSetupLatency;
  return SimTime{rtt.ticks * handshakeRtts()};
}

std::uint64_t
serializeOverhead(std::uint64_t payloadBytes, const StackProfile& profile)
{
  return payloadBytes + profile.overheadBytes();
}

} // namespace twinslice
