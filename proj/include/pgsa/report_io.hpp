#pragma once

#include <iosfwd>
#include <string>

#include "pgsa/spectral.hpp"

namespace pgsa {

/// CSV with header `x,e1,e2,...,d_e1,d_e2,...`.
void write_eigen_csv(std::ostream& os, const SpectralBasis& basis);

/// Sidecar metadata: eigenvalues, C_P, grid size and the sign/centering
/// conventions of the solver.
std::string eigen_metadata_json(const SpectralBasis& basis,
                                const std::string& measure_desc,
                                const std::string& weight_label, int cells);

}  // namespace pgsa
