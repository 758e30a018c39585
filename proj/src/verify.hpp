#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "config.hpp"
#include "fourier.hpp"
#include "lowdisc.hpp"
#include "report.hpp"

namespace liokam {

struct VerifyRow {
  std::string suite;
  CheckRow row;
};

// weights, algebra, cfrac, bridges, tail, solver, bequation, polar, divisors,
// area, model, measure, kam
const std::vector<std::string>& verify_suites();

// Runs one suite (or "all"). Instances come from the low-discrepancy stream
// keyed by cfg.seed, so a fixed seed reproduces every row.
std::vector<VerifyRow> run_verify(const std::string& suite, const RunConfig& cfg);

std::string verify_csv(const std::vector<VerifyRow>& rows);

// Draws in [0,1) from an additive recurrence whose offset mixes seed and stream.
class Sampler {
 public:
  Sampler(std::uint64_t seed, std::uint64_t stream);
  double uniform() { return ld_.next(0); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  cplx centered();  // real and imaginary parts in [-1/2, 1/2)

 private:
  LowDiscrepancy ld_;
};

// Coefficients c_k(lambda) = e^{-decay |k|} (x_k + y_k (lambda - 1/2)) with x,
// y drawn from s; real == true symmetrizes to a real-valued function.
FourierSeries random_series(const BasisPtr& b, int kmax, double decay, Sampler& s, bool real = false);

}  // namespace liokam
