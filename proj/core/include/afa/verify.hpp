#pragma once

#include <string>
#include <vector>

namespace afa {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Spectral checks: unit wave norms, two-bin energy concentration on the
// quantized frequency domain, and transform linearity of the augmentation
// with clamping disabled.
std::vector<CheckResult> verify_fft_suite(std::uint64_t seed = 7);

// Central finite differences against the analytic gradients for every layer
// and loss, over several seeds.
std::vector<CheckResult> verify_grad_suite(std::uint64_t seed = 11);

// Metric self-identities (mCE = 100, mFR = mT5D = 1 against itself) and
// equality of the shipped flip/top-5 code with a literal transcription of
// their defining double sums on random small instances.
std::vector<CheckResult> verify_metrics_suite(std::uint64_t seed = 13);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace afa
