#pragma once

// m-dimensional entropy and its joint / marginal / conditional calculus.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rectent/sources.hpp"

namespace rectent {

enum class EntropyMethod { analytic, quadrature, monte_carlo };

std::string to_string(EntropyMethod method);

/// Entropy in nats. std_error and n_samples are zero unless method is monte_carlo.
struct EntropyEstimate {
    double value = 0.0;
    EntropyMethod method = EntropyMethod::quadrature;
    double std_error = 0.0;
    std::size_t n_samples = 0;
};

/// -int_E theta log theta dH^m by the area formula.
EntropyEstimate entropy_quadrature(const RectifiableSource& source,
                                   const IntegrationOptions& opts = {});
/// Sample mean of -log theta over n >= 100 draws.
EntropyEstimate entropy_monte_carlo(const RectifiableSource& source, std::uint64_t seed,
                                    std::size_t n);
/// The closed form attached to the source; throws when there is none.
EntropyEstimate entropy_analytic(const RectifiableSource& source);
/// Analytic when available, quadrature otherwise.
EntropyEstimate entropy_reference(const RectifiableSource& source,
                                  const IntegrationOptions& opts = {});

/// h(phi(x)) = h(x) + E[log J_phi(x)] for a map one-to-one on the support.
double entropy_transformed(double base_entropy, double expected_log_jacobian);

/// Hausdorff density of the projection y = x[coords].
///
/// Available for curves projected to one coordinate (coarea fibers), for
/// projections onto one factor of a product source, for full-dimensional
/// sources (integrating out the remaining coordinates) and for the identity.
class MarginalDensity {
public:
    MarginalDensity(const RectifiableSource& joint, std::vector<int> coords);

    /// Dimension m_2 of the projected variable.
    int dim() const noexcept { return dim_; }
    double operator()(const Vector& y) const;
    /// Same value, together with warnings about dropped degenerate fiber points.
    FiberIntegral evaluate(const Vector& y) const;
    /// Density at the projection of a support point given by chart parameters.
    ///
    /// On curves the point's own fiber term is taken from its parameter rather
    /// than from root finding, which stays accurate near folds of the projection.
    double at_support_point(std::size_t chart, const Vector& param) const;

private:
    std::shared_ptr<const RectifiableSource> joint_;
    std::vector<int> coords_;
    bool curve_ = false;
    int dim_ = 0;
    std::function<FiberIntegral(const Vector&)> eval_;
};

/// h^{m2}(y) = -int_E theta(x) log theta_y(x[coords]) dH^m.
EntropyEstimate marginal_entropy(const RectifiableSource& joint, const std::vector<int>& coords,
                                 const IntegrationOptions& opts = {});
/// E[log J^E_{p_y}] under the joint density.
EntropyEstimate jacobian_correction(const RectifiableSource& joint, const std::vector<int>& coords,
                                    const IntegrationOptions& opts = {});
/// h(x | y) = -E[log theta] + E[log theta_y] + E[log J^E_{p_y}], computed as one integral.
EntropyEstimate conditional_entropy(const RectifiableSource& joint, const std::vector<int>& coords,
                                    const IntegrationOptions& opts = {});

struct JointDecomposition {
    EntropyEstimate joint;
    EntropyEstimate marginal_y;
    EntropyEstimate conditional_x_given_y;
    EntropyEstimate jacobian_correction;

    /// joint - marginal - conditional + correction; zero when the chain rule holds.
    double residual() const {
        return joint.value - marginal_y.value - conditional_x_given_y.value +
               jacobian_correction.value;
    }
};

/// All four chain-rule terms, each computed independently by quadrature.
JointDecomposition chain_decomposition(const RectifiableSource& joint,
                                       const std::vector<int>& coords,
                                       const IntegrationOptions& opts = {});

struct MutualInformation {
    double value = 0.0;
    bool infinite = false;
};

/// I(x; y) = h(x) + h(y) - h(x, y) when the joint dimension is m1 + m2, and
/// +infinity when it is smaller. Without a joint the pair is taken independent.
MutualInformation mutual_information(const RectifiableSource& x, const RectifiableSource& y,
                                     const RectifiableSource* joint = nullptr,
                                     EntropyMethod method = EntropyMethod::quadrature,
                                     const IntegrationOptions& opts = {});

}  // namespace rectent
