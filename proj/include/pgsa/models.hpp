#pragma once

#include <span>
#include <string>
#include <vector>

#include "pgsa/gsa.hpp"

namespace pgsa {

/// f(x) = x1 + x2^2 + x3^3 + x4^4 + x5^5 on U(0,1)^5, with exact gradient
/// and closed-form total Sobol indices.
Model toy1_model();
std::vector<double> toy1_sobol_oracle();
double toy1_variance();

/// Product model prod_i (1 + h(x_i)/(1+a_i)) with h(x) = x^4 - 1/5 on
/// U(0,1)^d; `a` controls how influential each input is.
Model toy2_model(std::vector<double> a = {1.0, 2.0, 4.5, 90.0, 90.0});
std::vector<double> toy2_sobol_oracle(const std::vector<double>& a = {1.0, 2.0, 4.5, 90.0,
                                                                      90.0});
double toy2_variance(const std::vector<double>& a);

/// Flood case: overflow S and maintenance cost C on the eight Table inputs
/// (Q, K_s, Z_v, Z_m, H_d, C_b, L, B), finite-difference gradients.
Model flood_model_s();
Model flood_model_c();
const std::vector<std::string>& flood_input_names();

double flood_s_eval(std::span<const double> x);
double flood_c_eval(std::span<const double> x);

/// Jansen totals for both flood outputs at the reference settings; the S half
/// is committed as the regression fixture under tests/data.
std::pair<SobolEstimate, SobolEstimate> flood_reference_run(int n = 10000,
                                                            std::uint64_t seed = 4242);

/// Registry for the CLI: toy1 | toy2 | flood_s | flood_c.
Model builtin_model(const std::string& name);
bool is_builtin_model(const std::string& name);

}  // namespace pgsa
