#pragma once

#include "twinslice/sim/time.hpp"

#include <cstdint>
#include <optional>

namespace twinslice {

enum class Transport : std::uint8_t
{
  Quic,
  Udp,
};

/// Per-layer header bytes and handshake cost of the Cybertwin protocol stack.
struct StackProfile
{
  std::uint32_t alp = 8;   // application layer protocol
  std::uint32_t mqtt = 4;  // session
  std::uint32_t tls = 29;  // security
  std::uint32_t quic = 27;
  std::uint32_t udp = 8;
  std::uint32_t ipv6 = 40;
  std::uint32_t phy = 28;  // PHY/link framing
  Transport transport = Transport::Quic;

  // Handshake round trips charged as per-flow setup latency.
  std::uint32_t tlsHandshakeRtts = 1;
  std::uint32_t quicHandshakeRtts = 1;

  // When set, replaces the RTT-derived setup latency.
  std::optional<SimTime> fixedSetupLatency;

  static StackProfile zero();

  std::uint32_t transportOverhead() const { return transport == Transport::Quic ? quic : udp; }
  std::uint64_t overheadBytes() const;
  std::uint32_t handshakeRtts() const;

  /// Setup latency for a flow whose unloaded round trip is `rtt`.
  SimTime setupLatency(SimTime rtt) const;
};

/// Frame bytes on the wire for `payloadBytes` of application data.
std::uint64_t serializeOverhead(std::uint64_t payloadBytes, const StackProfile& profile);

} // namespace twinslice
