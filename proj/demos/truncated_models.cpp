// Numeric tour at q = 0.9: Gram spectra of the deformed word basis level by
// level, then relation residuals of the shift-block model on a truncated
// tensor space, printed as a verification report.
#include <complex>
#include <iostream>

#include "qstar/representations.hpp"
#include "qstar/rewrite.hpp"
#include "qstar/verification.hpp"

using namespace qstar;

int main() {
  auto f = make_float_field(std::complex<double>(0.9, 0.0));
  auto rs = RewriteSystem<FloatField>::deformed_cuntz2(f);

  std::cout << "deformed Gram spectra, q = 0.9:\n";
  for (int level = 1; level <= 5; ++level) {
    auto gram = rs.gram_matrix(level);
    auto psd = psd_check(f, gram, 1e-10);
    std::cout << "  level " << level << ": " << gram.words.size()
              << " words, smallest eigenvalue " << psd.min_eigenvalue
              << (psd.pass ? "  (positive)" : "  (NOT positive)") << "\n";
  }

  // The coefficient leg only needs to be as deep as the word truncation
  // reads into it, so a shallow shift space is enough here.
  auto pi = fock_o_infinity(f, 3, 2);
  auto qcun = build_qcun(pi, 3);
  std::cout << "\nshift-block model on " << space_kind_name(qcun.space->kind())
            << " of dimension " << qcun.space->size() << ":\n";
  auto report = check_relations(qcun, 6, 1e-12);
  report.write_text(std::cout);
  return report.all_pass() ? 0 : 1;
}
