#pragma once

namespace surv {

/// Entry point shared by the binary and the integration tests.
int run_command(int argc, const char* const* argv);

}  // namespace surv
