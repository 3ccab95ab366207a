#pragma once

#include <ostream>

namespace isonorm {

// Exit codes: 0 ok, 1 a mathematical check failed, 2 bad input or usage.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace isonorm
