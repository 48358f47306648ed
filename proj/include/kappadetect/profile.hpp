#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kappadetect/geometry.hpp"
#include "kappadetect/projection.hpp"

namespace kappadetect {

/// Strictly increasing target dimensions k_1 < ... < k_m.
class DimensionRange {
public:
    DimensionRange() = default;
    /// Throws DimensionError unless nonempty, strictly increasing and >= 1.
    explicit DimensionRange(std::vector<int> dims);

    /// lo, lo+1, ..., hi.
    static DimensionRange consecutive(int lo, int hi);
    /// Accepts "A..B" or a comma-separated list "1,2,5".
    static DimensionRange parse(const std::string& text);

    const std::vector<int>& dims() const noexcept { return dims_; }
    std::size_t size() const noexcept { return dims_.size(); }
    int front() const { return dims_.front(); }
    int back() const { return dims_.back(); }
    int operator[](std::size_t i) const { return dims_[i]; }

    /// Throws DimensionError if any entry exceeds the ambient dimension n.
    void check_ambient(int n) const;

    std::string to_string() const;

    friend bool operator==(const DimensionRange&, const DimensionRange&) = default;

private:
    std::vector<int> dims_;
};

/// (1, 2, ..., min(n, 10)).
DimensionRange default_dims(int n);

struct KappaProfile {
    DimensionRange dims;
    std::vector<double> values;
    int trials_averaged = 0;
    /// per_trial[j][i] is trial j's kappa at dims[i].
    std::vector<std::vector<double>> per_trial;
    /// optima[j][i] is the projection behind per_trial[j][i].
    std::vector<std::vector<Eigen::MatrixXd>> optima;
};

struct ProfileOptions {
    int trials = 5;
    /// Solver starts per trial and dimension; the best is kept. Restart 0 is
    /// the warm start when there is one.
    int restarts = 16;
    SecantFilterPolicy policy;
    SolverConfig solver;
    /// Start dimension k_{i+1} from the k_i solution plus fresh random columns.
    bool warm_start = true;
    int jobs = 1;

    void validate() const;
};

/// Trial-averaged kappa profile of a cloud.
///
/// Trial j at dimension k starts from a random combination of the secants,
///   P0 = orth( sum_{(a,b)} s_ab (h_a - h_b)^T ),
/// with h_key ~ N(0, I_k) drawn from stream derive_seed(seed, j, k) in key
/// order. The start therefore rotates with the data, so profiles are
/// invariant to rigid motions and uniform scaling at equal seeds, and two
/// clouds sharing points (under equal keys) share those terms of their start.
///
/// `point_keys`, when given, assigns each point a stable small integer used to
/// index h; by default point i has key i.
KappaProfile compute_kappa_profile(const PointCloud& cloud, const DimensionRange& dims,
                                   const ProfileOptions& options,
                                   std::span<const std::size_t> point_keys = {});

KappaProfile compute_kappa_profile(const PointCloud& cloud, const DimensionRange& dims, int trials,
                                   const SecantFilterPolicy& policy, const SolverConfig& cfg);

/// Profile of an already computed secant set; keys index the points named in
/// `s.pairs`.
KappaProfile profile_of_secants(const SecantSet& s, const DimensionRange& dims,
                                const ProfileOptions& options,
                                std::span<const std::size_t> point_keys = {});

/// Profile of `cloud` where trial j at dims[i] is refined from
/// `start.optima[j][i]` instead of a fresh random start. Uses the dims and
/// trial count of `start`. Comparing clouds that differ by one point this way
/// measures the local effect of that point rather than solver noise.
KappaProfile refine_kappa_profile(const PointCloud& cloud, const KappaProfile& start,
                                  const ProfileOptions& options);

/// l2 norm of the element-wise difference. Throws IncompatibleError when the
/// dims differ.
double profile_distance(const KappaProfile& a, const KappaProfile& b);

}  // namespace kappadetect
