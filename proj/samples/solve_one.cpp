// Draws one instance, solves it and checks the certificate.
#include <cstdio>

#include "angsync/angsync.hpp"

int main() {
  using namespace angsync;
  const int n = 200;
  const double sigma = 1.5;
  const std::uint64_t seed = 42;

  const SyncInstance inst = assemble_instance(random_signal(n, seed), sample_wigner(n, seed), sigma, seed);
  const SolverReport sol = solve_second_order(inst.C(), spectral_init(inst.C()), inst.z());
  const PhaseVector x = align_global_phase(sol.x, inst.z());
  const CertificateReport cert = certify(inst.C(), x);

  std::printf("converged=%d iterations=%d cost=%.6f planted=%.6f\n", sol.converged, sol.iterations, sol.cost,
              cost(inst.C(), inst.z()));
  std::printf("l2 error=%.4f  min eig=%.3e  second eig=%.3f  tight=%d unique=%d\n", l2_error(x, inst.z()),
              cert.min_eig, cert.second_eig, cert.tight, cert.unique);
  return cert.tight ? 0 : 1;
}
