#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <utility>

#include "errors.hpp"

namespace liokam::fft {

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface
// is. Plans use FFTW_ESTIMATE so the chosen algorithm, and hence every bit
// of output, is the same on each run.
struct PlanCache {
  std::mutex mu;
  std::map<std::pair<int, int>, fftw_plan> plans;

  fftw_plan get(int n, int sign) {
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, sign);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    fftw_complex* a = fftw_alloc_complex(n);
    fftw_complex* b = fftw_alloc_complex(n);
    fftw_plan p = fftw_plan_dft_1d(n, a, b, sign, FFTW_ESTIMATE);
    fftw_free(a);
    fftw_free(b);
    if (!p) throw InternalError("fftw plan creation failed");
    plans.emplace(key, p);
    return p;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

struct Buffer {
  fftw_complex* in;
  fftw_complex* out;
  explicit Buffer(int n) : in(fftw_alloc_complex(n)), out(fftw_alloc_complex(n)) {}
  ~Buffer() {
    fftw_free(in);
    fftw_free(out);
  }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
};

}  // namespace

int pow2_at_least(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

void synthesize(const cplx* c, int kmax, int n, cplx* out) {
  if (n <= 2 * kmax) throw InternalError("synthesize: grid too coarse for support");
  Buffer buf(n);
  std::memset(buf.in, 0, sizeof(fftw_complex) * n);
  for (int k = -kmax; k <= kmax; ++k) {
    int j = k < 0 ? k + n : k;
    buf.in[j][0] = c[k + kmax].real();
    buf.in[j][1] = c[k + kmax].imag();
  }
  fftw_execute_dft(cache().get(n, FFTW_BACKWARD), buf.in, buf.out);
  for (int j = 0; j < n; ++j) out[j] = cplx(buf.out[j][0], buf.out[j][1]);
}

void analyze(const cplx* x, int n, int kmax, cplx* c) {
  if (n <= 2 * kmax) throw InternalError("analyze: grid too coarse for support");
  Buffer buf(n);
  for (int j = 0; j < n; ++j) {
    buf.in[j][0] = x[j].real();
    buf.in[j][1] = x[j].imag();
  }
  fftw_execute_dft(cache().get(n, FFTW_FORWARD), buf.in, buf.out);
  const double s = 1.0 / n;
  for (int k = -kmax; k <= kmax; ++k) {
    int j = k < 0 ? k + n : k;
    c[k + kmax] = cplx(buf.out[j][0] * s, buf.out[j][1] * s);
  }
}

}  // namespace liokam::fft
