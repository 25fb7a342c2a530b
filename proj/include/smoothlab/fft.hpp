#pragma once

#include <array>
#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace smoothlab::detail {

// Thin wrapper around FFTW complex transforms.
//
// FFTW plan creation is not thread safe, execution of an existing plan is.
// Plans are cached per (rank, extents, sign) and created under a lock with
// FFTW_ESTIMATE | FFTW_UNALIGNED, so a cached plan can later be executed on
// any distinct in/out buffers of the same shape via fftw_execute_dft.
class FftEngine {
public:
    static FftEngine& instance() {
        static FftEngine engine;
        return engine;
    }

    FftEngine(const FftEngine&) = delete;
    FftEngine& operator=(const FftEngine&) = delete;

    // Unnormalized c2c transform, sign = FFTW_FORWARD or FFTW_BACKWARD.
    // Requires in != out (all plans are out-of-place).
    void transform(int rank, const std::array<int, 3>& extents,
                   const std::complex<double>* in, std::complex<double>* out,
                   int sign) {
        if (rank < 1 || rank > 3)
            throw std::invalid_argument("FftEngine: rank must be 1..3");
        if (static_cast<const void*>(in) == static_cast<const void*>(out))
            throw std::invalid_argument("FftEngine: in-place transform not supported");
        fftw_plan plan = acquire_plan(rank, extents, sign);
        // fftw_execute_dft does not modify the input array for c2c plans.
        fftw_execute_dft(plan,
                         reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                         reinterpret_cast<fftw_complex*>(out));
    }

private:
    struct PlanKey {
        int rank;
        int sign;
        std::array<int, 3> extents;
        auto operator<=>(const PlanKey&) const = default;
    };

    FftEngine() = default;

    ~FftEngine() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan acquire_plan(int rank, const std::array<int, 3>& extents, int sign) {
        PlanKey key{rank, sign, extents};
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;

        std::size_t total = 1;
        for (int i = 0; i < rank; ++i) total *= static_cast<std::size_t>(extents[i]);
        // Scratch buffers only for planning; FFTW_ESTIMATE leaves them untouched.
        fftw_complex* a = fftw_alloc_complex(total);
        fftw_complex* b = fftw_alloc_complex(total);
        fftw_plan plan = fftw_plan_dft(rank, extents.data(), a, b, sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(a);
        fftw_free(b);
        if (!plan) throw std::runtime_error("FftEngine: fftw_plan_dft failed");
        plans_.emplace(key, plan);
        return plan;
    }

    std::mutex mutex_;
    std::map<PlanKey, fftw_plan> plans_;
};

}  // namespace smoothlab::detail
