#pragma once

#include <ostream>

namespace sglab {

// Runs the acceptance criteria, printing one PASS/FAIL line per criterion.
// quick = true runs the reduced-sample smoke variant. Returns the number of
// failed criteria.
int run_acceptance(bool quick, std::ostream& out);

}  // namespace sglab
