#include "twinslice/slices/slice.hpp"

namespace twinslice {

std::string_view
toString(SliceClass slice)
{
  switch (slice) {
  case SliceClass::FeMBB: return "FeMBB";
  case SliceClass::ERLLC: return "ERLLC";
  case SliceClass::LDHMC: return "LDHMC";
  case SliceClass::umMTC: return "umMTC";
  case SliceClass::ELPC: return "ELPC";
  }
  return "?";
}

std::optional<SliceClass>
parseSliceClass(std::string_view name)
{
  for (auto s : kAllSlices)
    if (toString(s) == name)
      return s;
  return std::nullopt;
}

QosContract
defaultContract(SliceClass slice)
{
  QosContract c;
  switch (slice) {
  case SliceClass::ERLLC:
    c.maxE2eDelay = milliseconds(1);
    c.maxLoss = 1e-5;
    break;
  case SliceClass::FeMBB:
    c.minRateBps = 5'000'000;
    c.maxE2eDelay = milliseconds(50);
    break;
  case SliceClass::LDHMC:
    c.maxE2eDelay = milliseconds(20);
    c.mobilityKmh = 1000.0;
    break;
  case SliceClass::umMTC:
    c.maxE2eDelay = seconds(1);
    c.maxLoss = 1e-2;
    break;
  case SliceClass::ELPC:
    c.maxE2eDelay = seconds(10);
    c.maxEnergyPerMsg = 50'000'000; // 50 uJ
    break;
  }
  return c;
}

ContractTable
defaultContracts()
{
  ContractTable t;
  for (auto s : kAllSlices)
    t[index(s)] = defaultContract(s);
  return t;
}

} // namespace twinslice
