#include "nsforge/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace nsforge {

namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    std::size_t phys_sz = 0, spec_sz = 0;
};

// Plans are created once per (dim, N) with FFTW_ESTIMATE so that planning is
// deterministic; execution uses the new-array interface and is re-entrant.
class PlanCache {
  public:
    static PlanPair& get(const GridSpec& g) {
        static PlanCache cache;
        std::lock_guard<std::mutex> lock(cache.mu_);
        auto key = std::make_pair(g.dim, g.points);
        auto it = cache.plans_.find(key);
        if (it != cache.plans_.end()) return it->second;

        PlanPair p;
        p.phys_sz = g.cells();
        p.spec_sz = g.spec_size();
        std::vector<double> rbuf(p.phys_sz);
        std::vector<cplx> cbuf(p.spec_sz);
        int dims[3] = {g.points, g.points, g.points};
        p.fwd = fftw_plan_dft_r2c(g.dim, dims, rbuf.data(),
                                  reinterpret_cast<fftw_complex*>(cbuf.data()), FFTW_ESTIMATE);
        p.bwd = fftw_plan_dft_c2r(g.dim, dims, reinterpret_cast<fftw_complex*>(cbuf.data()),
                                  rbuf.data(), FFTW_ESTIMATE);
        if (!p.fwd || !p.bwd) throw std::runtime_error("fftw plan creation failed");
        return cache.plans_.emplace(key, p).first->second;
    }

  private:
    std::mutex mu_;
    std::map<std::pair<int, int>, PlanPair> plans_;
};

}  // namespace

std::vector<cplx> fft_forward(const GridSpec& g, const std::vector<double>& phys) {
    PlanPair& p = PlanCache::get(g);
    if (phys.size() != p.phys_sz) throw std::invalid_argument("fft_forward: size mismatch");
    std::vector<double> in(phys);  // r2c may scribble on input for some rank/size combos
    std::vector<cplx> out(p.spec_sz);
    fftw_execute_dft_r2c(p.fwd, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

std::vector<double> fft_backward(const GridSpec& g, const std::vector<cplx>& spec) {
    PlanPair& p = PlanCache::get(g);
    if (spec.size() != p.spec_sz) throw std::invalid_argument("fft_backward: size mismatch");
    std::vector<cplx> in(spec);  // c2r destroys its input
    std::vector<double> out(p.phys_sz);
    fftw_execute_dft_c2r(p.bwd, reinterpret_cast<fftw_complex*>(in.data()), out.data());
    const double scale = 1.0 / static_cast<double>(p.phys_sz);
    for (double& v : out) v *= scale;
    return out;
}

void dealias_truncate(const GridSpec& g, std::vector<cplx>& spec) {
    for_each_mode(g, [&](std::size_t idx, const std::array<double, 3>&,
                         const std::array<int, 3>& ks) {
        if (!mode_kept(g, ks)) spec[idx] = 0.0;
    });
}

}  // namespace nsforge
