#pragma once

namespace ga {

/// Selects between the OpenMP kernel and the serial reference loop that
/// the tests compare it against.
enum class Exec { serial, parallel };

/// Thread count used by parallel kernels: GA_THREADS when set to a positive
/// integer, otherwise the OpenMP default.
int sweep_threads();

}  // namespace ga
