#include "pgsa/report_io.hpp"

#include <cstdio>
#include <ostream>

#include "json.hpp"

namespace pgsa {

void write_eigen_csv(std::ostream& os, const SpectralBasis& basis) {
  const int K = basis.size();
  os << "x";
  for (int n = 1; n <= K; ++n) os << ",e" << n;
  for (int n = 1; n <= K; ++n) os << ",d_e" << n;
  os << "\n";
  char buf[48];
  for (std::size_t j = 0; j < basis.nodes.size(); ++j) {
    std::snprintf(buf, sizeof(buf), "%.12e", basis.nodes[j]);
    os << buf;
    for (int n = 0; n < K; ++n) {
      std::snprintf(buf, sizeof(buf), ",%.12e", basis.eigenfunctions[n][j]);
      os << buf;
    }
    for (int n = 0; n < K; ++n) {
      std::snprintf(buf, sizeof(buf), ",%.12e", basis.derivatives[n][j]);
      os << buf;
    }
    os << "\n";
  }
}

std::string eigen_metadata_json(const SpectralBasis& basis,
                                const std::string& measure_desc,
                                const std::string& weight_label, int cells) {
  nlohmann::ordered_json j;
  j["measure"] = measure_desc;
  j["weight"] = weight_label;
  j["cells"] = cells;
  j["eigenvalues"] = basis.eigenvalues;
  j["c_p"] = basis.poincare_constant();
  j["lambda0"] = basis.lambda0;
  j["residuals"] = basis.residuals;
  j["conventions"] = {{"centering", "mu-centered"},
                      {"normalization", "L2(mu) unit norm"},
                      {"sign", "positive at the right endpoint"},
                      {"derivatives", "adjacent-slope average"}};
  return j.dump(2) + "\n";
}

}  // namespace pgsa
