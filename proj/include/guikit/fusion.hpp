#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace guikit::fusion {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<const double> row(std::size_t r) const noexcept {
    return std::span<const double>(data_).subspan(r * cols_, cols_);
  }

  bool all_finite() const noexcept;
  Matrix transposed() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// a (n x k) * b (k x m). Throws Dimension on mismatch.
Matrix matmul(const Matrix& a, const Matrix& b);
/// a (n x k) * b^T where b is (m x k).
Matrix matmul_transposed(const Matrix& a, const Matrix& b);
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Screen features (m x d_s, m = 1 for a single image embedding) and
/// language features (n x d_l).
struct FeatureBundle {
  Matrix screen;
  Matrix language;
};

/// projection: d_l x d_s. gate_language, gate_vision: d_l x d_l.
struct FusionParams {
  Matrix projection;
  Matrix gate_language;
  Matrix gate_vision;
};

struct Dims {
  std::size_t screen_tokens = 1;
  std::size_t screen_dim = 32;
  std::size_t language_tokens = 8;
  std::size_t language_dim = 16;
};

/// Throws Dimension when shapes disagree or any entry is NaN/Inf.
void validate(const FeatureBundle& b, const FusionParams& p);

/// Screen features mapped into the language width: screen * projection^T.
Matrix project(const Matrix& screen, const Matrix& projection);

struct Attention {
  Matrix weights;  // n x m, rows are probability vectors
  Matrix output;   // n x d_l
};

/// Single-head scaled dot-product attention with explicit Q, K, V.
Attention scaled_dot_attention(const Matrix& query, const Matrix& key, const Matrix& value);

/// Language features attend over the projected screen features.
Attention attend(const FeatureBundle& b, const FusionParams& p);

struct Fused {
  Matrix gate;    // lambda, n x d_l, entries in (0, 1)
  Matrix output;  // (1 - lambda) * language + lambda * attended
};

/// lambda = sigmoid(language * W_l^T + attended * W_v^T)
Fused gate_fuse(const Matrix& language, const Matrix& attended, const FusionParams& p);

/// Projection, attention and gated fusion end to end.
Fused forward(const FeatureBundle& b, const FusionParams& p);

enum class GradTarget {
  Projection,          // project() wrt the projection matrix
  AttentionQuery,      // attend() wrt the language features used as Q
  AttentionProjection, // attend() wrt the projection matrix (through K and V)
  GateLanguage,        // gate_fuse() wrt W_l
  GateVision,          // gate_fuse() wrt W_v
  Pipeline,            // forward() wrt the projection matrix
};

std::string_view to_string(GradTarget t) noexcept;

struct GradCheckResult {
  double max_relative_error = 0.0;
  double max_absolute_error = 0.0;
  std::size_t entries = 0;
};

/// Compares the analytic gradient of <R, f(theta)> for a random probe R
/// against central finite differences on every entry of theta.
/// eps must lie in [1e-7, 1e-3].
GradCheckResult grad_check(GradTarget target, const FeatureBundle& b, const FusionParams& p,
                           double eps, std::uint64_t probe_seed = 1);

FeatureBundle random_bundle(const Dims& d, std::uint64_t seed);
FusionParams random_params(const Dims& d, std::uint64_t seed, double scale = 0.5);

std::string to_json(const Matrix& m);
Matrix matrix_from_json(std::string_view text);
std::string to_json(const FeatureBundle& b);
std::string to_json(const FusionParams& p);
FeatureBundle bundle_from_json(std::string_view text);
FusionParams params_from_json(std::string_view text);

}  // namespace guikit::fusion
