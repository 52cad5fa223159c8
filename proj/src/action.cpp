#include "gacomb/action.hpp"

#include "gacomb/error.hpp"

namespace gacomb {

ElementSet GroupAction::transporter(const Point&, const Point&) const {
  throw CapabilityMissing(kind() + ": no transporter capability");
}

}  // namespace gacomb
