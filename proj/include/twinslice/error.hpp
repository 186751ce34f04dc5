#pragma once

#include <stdexcept>
#include <string>

namespace twinslice {

class Error : public std::runtime_error
{
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define TWINSLICE_DEFINE_ERROR(Name)                                   \
  class Name : public Error                                            \
  {                                                                    \
  public:                                                              \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

TWINSLICE_DEFINE_ERROR(SchedulePast);
TWINSLICE_DEFINE_ERROR(TopologyInvalid);
TWINSLICE_DEFINE_ERROR(Unreachable);
TWINSLICE_DEFINE_ERROR(LinkDown);
TWINSLICE_DEFINE_ERROR(MessageInvalid);
TWINSLICE_DEFINE_ERROR(UnknownMetric);
TWINSLICE_DEFINE_ERROR(UnknownNode);
TWINSLICE_DEFINE_ERROR(UnknownTarget);
TWINSLICE_DEFINE_ERROR(EmptyHistogram);
TWINSLICE_DEFINE_ERROR(NegativeDelay);
TWINSLICE_DEFINE_ERROR(IoFailure);

#undef TWINSLICE_DEFINE_ERROR

} // namespace twinslice
