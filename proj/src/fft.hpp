#pragma once

#include <complex>
#include <vector>

namespace liokam::fft {

using cplx = std::complex<double>;

// out[j] = sum_{|k|<=kmax} c[k+kmax] e^{i 2 pi k j / n},  j = 0..n-1.
void synthesize(const cplx* c, int kmax, int n, cplx* out);

// c[k+kmax] = (1/n) sum_j x[j] e^{-i 2 pi k j / n},  |k| <= kmax, requires n > 2 kmax.
void analyze(const cplx* x, int n, int kmax, cplx* c);

// Smallest power of two >= n.
int pow2_at_least(int n);

}  // namespace liokam::fft
