#include "nsb/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace nsb::kernels {

namespace {
std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{best_available()};
  return isa;
}
}  // namespace

std::string to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

Isa isa_from_string(const std::string& s) {
  if (s == "auto") return best_available();
  if (s == "scalar") return Isa::Scalar;
  if (s == "avx2") return Isa::Avx2;
  throw std::invalid_argument("unknown kernel '" + s + "' (auto|scalar|avx2)");
}

bool available(Isa isa) {
  if (isa == Isa::Scalar) return true;
#if defined(__x86_64__) && defined(NSB_BUILD_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa best_available() { return available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar; }

Isa active() { return current().load(); }

void set_active(Isa isa) {
  if (!available(isa)) throw std::invalid_argument("kernel " + to_string(isa) + " unavailable on this CPU");
  current().store(isa);
}

void triad_accumulate(Isa isa, const TriadSpan& t, const double* weight, const cplx* g, const cplx* h,
                      cplx* out) {
  if (isa == Isa::Avx2) return avx2::triad_accumulate(t, weight, g, h, out);
  scalar::triad_accumulate(t, weight, g, h, out);
}

void box_convolve(Isa isa, const BoxInput& in, const int* n_list, std::size_t count, cplx* out) {
  if (isa == Isa::Avx2) return avx2::box_convolve(in, n_list, count, out);
  scalar::box_convolve(in, n_list, count, out);
}

}  // namespace nsb::kernels
