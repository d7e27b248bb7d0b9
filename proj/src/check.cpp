#include "fusion/check.hpp"

namespace fusion {

Json to_json(const Bidegree& b) { return Json::array({b.k, b.s}); }

Json to_json(const GradedCharacter& c) { return c.to_string(); }

}  // namespace fusion
