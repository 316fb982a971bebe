#include "kanlab/kernels/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace kanlab::kernels {

bool avx2_compiled() {
#if KANLAB_HAVE_AVX2
  return true;
#else
  return false;
#endif
}

bool avx2_supported() {
#if KANLAB_HAVE_AVX2
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

#if !KANLAB_HAVE_AVX2
const Ops& avx2_ops() {
  throw std::runtime_error("AVX2 kernels are not built into this binary");
}
#endif

namespace {

Backend resolve_default() {
  if (const char* env = std::getenv("KANLAB_KERNELS")) {
    const std::string v(env);
    if (v == "scalar") return Backend::scalar;
    if (v == "avx2") {
      if (!avx2_supported())
        throw std::runtime_error(
            "KANLAB_KERNELS=avx2 requested but AVX2 kernels are unavailable");
      return Backend::avx2;
    }
    if (!v.empty() && v != "auto")
      throw std::runtime_error(
          "KANLAB_KERNELS must be one of: scalar, avx2, auto");
  }
  return avx2_supported() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& state() {
  static std::atomic<Backend> current{resolve_default()};
  return current;
}

}  // namespace

Backend active_backend() { return state().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_supported())
    throw std::runtime_error("AVX2 kernels are unavailable on this machine");
  state().store(b, std::memory_order_relaxed);
}

const Ops& active() {
  return active_backend() == Backend::avx2 ? avx2_ops() : scalar_ops();
}

}  // namespace kanlab::kernels
