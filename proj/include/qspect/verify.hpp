#pragma once

#include <cstdint>
#include <iosfwd>

namespace qspect {

struct VerifyOptions {
    bool flip_v_sign = false;  // fault injection: negates V inside the engine
    std::uint64_t seed = 2026;
};

/// Fast invariant suite: swap-test identities, Hadamard test, FD vs analytic
/// derivatives, Tikhonov consistency, dense deflation spectrum shift, Pauli
/// algebra round trips, and imaginary-time energy monotonicity. Prints one
/// line per property (`ok <name>` or `FAIL <name>: <detail>`) and returns the
/// number of failed properties.
int run_verification(const VerifyOptions& options, std::ostream& out);

}  // namespace qspect
