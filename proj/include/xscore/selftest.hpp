#pragma once

#include <cstdint>
#include <ostream>

namespace xscore {

// Built-in regression suite over embedded fixtures plus a couple of
// seeded property demos. Prints one line per check; returns overall pass.
bool run_selftest(std::ostream& out, uint64_t seed = 0);

} // namespace xscore
