#pragma once

#include <stdexcept>
#include <string>

namespace jdlg {

// Base class for every failure this library reports deliberately.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// input shape problems
struct dimension_mismatch : error { using error::error; };
struct malformed_parameters : error { using error::error; };
struct malformed_input : error { using error::error; };
struct non_associative : error { using error::error; };

// spectral / dynamical refusals
struct boundary_collision : error { using error::error; };
struct not_power_bounded : error { using error::error; };
struct not_a_group : error { using error::error; };

// iteration outcomes
struct budget_exhausted : error { using error::error; };
struct no_convergence : error { using error::error; };

// admissibility findings
struct multiple_idempotents : error { using error::error; };
struct kernel_not_group : error { using error::error; };

// unitary structure
struct span_deficiency : error { using error::error; };
struct not_positive_definite : error { using error::error; };
struct commutant_solve_failure : error { using error::error; };

} // namespace jdlg
