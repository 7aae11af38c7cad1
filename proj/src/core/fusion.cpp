#include "guikit/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <json.hpp>

#include "guikit/error.hpp"
#include "random.hpp"

namespace guikit::fusion {

namespace {

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

[[noreturn]] void dimension_error(const std::string& what) { fail(ErrorCode::Dimension, what); }

double sigmoid(double z) {
  // Split by sign so exp never overflows.
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Matrix elementwise(const Matrix& a, const Matrix& b, const std::function<double(double, double)>& f) {
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = f(a.data()[i], b.data()[i]);
  return out;
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    dimension_error("matrix data has " + std::to_string(data_.size()) + " entries, expected " +
                    std::to_string(rows * cols));
  }
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) dimension_error("matmul " + shape(a) + " * " + shape(b));
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

Matrix matmul_transposed(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) dimension_error("matmul " + shape(a) + " * (" + shape(b) + ")^T");
  Matrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(j, k);
      out(i, j) = acc;
    }
  return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    dimension_error("cannot compare " + shape(a) + " with " + shape(b));
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

void validate(const FeatureBundle& b, const FusionParams& p) {
  const std::size_t ds = b.screen.cols();
  const std::size_t dl = b.language.cols();
  if (b.screen.rows() == 0 || ds == 0) dimension_error("screen features must be non-empty");
  if (b.language.rows() == 0 || dl == 0) dimension_error("language features must be non-empty");
  if (p.projection.rows() != dl || p.projection.cols() != ds) {
    dimension_error("projection must be " + std::to_string(dl) + "x" + std::to_string(ds) +
                    ", got " + shape(p.projection));
  }
  for (const Matrix* g : {&p.gate_language, &p.gate_vision}) {
    if (g->rows() != dl || g->cols() != dl) {
      dimension_error("gate matrices must be " + std::to_string(dl) + "x" + std::to_string(dl) +
                      ", got " + shape(*g));
    }
  }
  for (const Matrix* m : {&b.screen, &b.language, &p.projection, &p.gate_language, &p.gate_vision}) {
    if (!m->all_finite()) dimension_error("features and parameters must be finite");
  }
}

Matrix project(const Matrix& screen, const Matrix& projection) {
  return matmul_transposed(screen, projection);
}

Attention scaled_dot_attention(const Matrix& query, const Matrix& key, const Matrix& value) {
  if (query.cols() != key.cols()) dimension_error("query/key width mismatch");
  if (key.rows() != value.rows()) dimension_error("key/value length mismatch");
  if (query.cols() == 0 || key.rows() == 0) dimension_error("attention needs non-empty inputs");

  const double scale = 1.0 / std::sqrt(static_cast<double>(query.cols()));
  Attention out;
  out.weights = matmul_transposed(query, key);
  for (std::size_t i = 0; i < out.weights.rows(); ++i) {
    double peak = -INFINITY;
    for (std::size_t j = 0; j < out.weights.cols(); ++j) {
      out.weights(i, j) *= scale;
      peak = std::max(peak, out.weights(i, j));
    }
    double total = 0.0;
    for (std::size_t j = 0; j < out.weights.cols(); ++j) {
      out.weights(i, j) = std::exp(out.weights(i, j) - peak);
      total += out.weights(i, j);
    }
    for (std::size_t j = 0; j < out.weights.cols(); ++j) out.weights(i, j) /= total;
  }
  out.output = matmul(out.weights, value);
  return out;
}

Attention attend(const FeatureBundle& b, const FusionParams& p) {
  validate(b, p);
  const Matrix projected = project(b.screen, p.projection);
  return scaled_dot_attention(b.language, projected, projected);
}

Fused gate_fuse(const Matrix& language, const Matrix& attended, const FusionParams& p) {
  const std::size_t dl = language.cols();
  if (attended.rows() != language.rows() || attended.cols() != dl) {
    dimension_error("gate_fuse inputs differ: " + shape(language) + " vs " + shape(attended));
  }
  if (p.gate_language.rows() != dl || p.gate_language.cols() != dl ||
      p.gate_vision.rows() != dl || p.gate_vision.cols() != dl) {
    dimension_error("gate matrices must be " + std::to_string(dl) + "x" + std::to_string(dl));
  }
  const Matrix zl = matmul_transposed(language, p.gate_language);
  const Matrix zv = matmul_transposed(attended, p.gate_vision);
  Fused out;
  out.gate = elementwise(zl, zv, [](double a, double b) { return sigmoid(a + b); });
  out.output = Matrix(language.rows(), dl);
  for (std::size_t i = 0; i < language.size(); ++i) {
    const double lam = out.gate.data()[i];
    out.output.data()[i] = (1.0 - lam) * language.data()[i] + lam * attended.data()[i];
  }
  return out;
}

Fused forward(const FeatureBundle& b, const FusionParams& p) {
  const Attention a = attend(b, p);
  return gate_fuse(b.language, a.output, p);
}

std::string_view to_string(GradTarget t) noexcept {
  switch (t) {
    case GradTarget::Projection: return "projection";
    case GradTarget::AttentionQuery: return "attention_query";
    case GradTarget::AttentionProjection: return "attention_projection";
    case GradTarget::GateLanguage: return "gate_language";
    case GradTarget::GateVision: return "gate_vision";
    case GradTarget::Pipeline: return "pipeline";
  }
  return "unknown";
}

namespace {

double inner(const Matrix& a, const Matrix& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a.data()[i] * b.data()[i];
  return acc;
}

Matrix random_matrix(std::size_t rows, std::size_t cols, detail::Rng& rng, double scale) {
  Matrix m(rows, cols);
  for (double& v : m.data()) v = rng.uniform(-scale, scale);
  return m;
}

struct AttentionGrads {
  Matrix query;
  Matrix projected;  // through both key and value
};

/// Backward pass of attend() for upstream gradient `upstream` (n x d_l).
AttentionGrads attention_backward(const Matrix& query, const Matrix& projected,
                                  const Attention& fwd, const Matrix& upstream) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(query.cols()));
  const Matrix& w = fwd.weights;
  const Matrix d_weights = matmul_transposed(upstream, projected);  // n x m
  Matrix d_scores(w.rows(), w.cols());
  for (std::size_t i = 0; i < w.rows(); ++i) {
    double dot = 0.0;
    for (std::size_t j = 0; j < w.cols(); ++j) dot += d_weights(i, j) * w(i, j);
    for (std::size_t j = 0; j < w.cols(); ++j) d_scores(i, j) = w(i, j) * (d_weights(i, j) - dot);
  }
  AttentionGrads g;
  g.query = matmul(d_scores, projected);
  for (double& v : g.query.data()) v *= scale;
  Matrix d_key = matmul(d_scores.transposed(), query);
  for (double& v : d_key.data()) v *= scale;
  const Matrix d_value = matmul(w.transposed(), upstream);
  g.projected = elementwise(d_key, d_value, std::plus<double>());
  return g;
}

/// Gradient of the gate pre-activation and of the attended input.
struct GateGrads {
  Matrix pre;       // dL/dZ
  Matrix attended;  // dL/dH_attn
};

GateGrads gate_backward(const Matrix& language, const Matrix& attended, const FusionParams& p,
                        const Fused& fwd, const Matrix& upstream) {
  GateGrads g;
  g.pre = Matrix(language.rows(), language.cols());
  for (std::size_t i = 0; i < language.size(); ++i) {
    const double lam = fwd.gate.data()[i];
    g.pre.data()[i] =
        upstream.data()[i] * (attended.data()[i] - language.data()[i]) * lam * (1.0 - lam);
  }
  g.attended = matmul(g.pre, p.gate_vision);
  for (std::size_t i = 0; i < language.size(); ++i) {
    g.attended.data()[i] += upstream.data()[i] * fwd.gate.data()[i];
  }
  return g;
}

}  // namespace

GradCheckResult grad_check(GradTarget target, const FeatureBundle& b, const FusionParams& p,
                           double eps, std::uint64_t probe_seed) {
  if (!(eps >= 1e-7 && eps <= 1e-3)) {
    fail(ErrorCode::InvalidArgument, "finite-difference step must lie in [1e-7, 1e-3]");
  }
  validate(b, p);

  FeatureBundle bundle = b;
  FusionParams params = p;
  const Matrix projected = project(bundle.screen, params.projection);
  const Attention attn = scaled_dot_attention(bundle.language, projected, projected);

  // Output shape of the checked map decides the probe shape.
  const std::size_t out_rows =
      target == GradTarget::Projection ? bundle.screen.rows() : bundle.language.rows();
  detail::Rng rng(probe_seed);
  const Matrix probe = random_matrix(out_rows, bundle.language.cols(), rng, 1.0);

  Matrix* theta = nullptr;
  Matrix analytic;
  std::function<Matrix()> evaluate;

  switch (target) {
    case GradTarget::Projection:
      theta = &params.projection;
      analytic = matmul(probe.transposed(), bundle.screen);
      evaluate = [&] { return project(bundle.screen, params.projection); };
      break;
    case GradTarget::AttentionQuery:
      theta = &bundle.language;
      analytic = attention_backward(bundle.language, projected, attn, probe).query;
      evaluate = [&] { return attend(bundle, params).output; };
      break;
    case GradTarget::AttentionProjection:
      theta = &params.projection;
      analytic = matmul(attention_backward(bundle.language, projected, attn, probe).projected.transposed(),
                        bundle.screen);
      evaluate = [&] { return attend(bundle, params).output; };
      break;
    case GradTarget::GateLanguage:
    case GradTarget::GateVision: {
      const Fused fused = gate_fuse(bundle.language, attn.output, params);
      const GateGrads g = gate_backward(bundle.language, attn.output, params, fused, probe);
      const bool lang = target == GradTarget::GateLanguage;
      theta = lang ? &params.gate_language : &params.gate_vision;
      analytic = matmul(g.pre.transposed(), lang ? bundle.language : attn.output);
      // The attended features stay fixed: this checks gate_fuse alone.
      evaluate = [&, attended = attn.output] {
        return gate_fuse(bundle.language, attended, params).output;
      };
      break;
    }
    case GradTarget::Pipeline: {
      const Fused fused = gate_fuse(bundle.language, attn.output, params);
      const GateGrads g = gate_backward(bundle.language, attn.output, params, fused, probe);
      const AttentionGrads ag = attention_backward(bundle.language, projected, attn, g.attended);
      theta = &params.projection;
      analytic = matmul(ag.projected.transposed(), bundle.screen);
      evaluate = [&] { return forward(bundle, params).output; };
      break;
    }
  }

  GradCheckResult result;
  for (std::size_t i = 0; i < theta->size(); ++i) {
    double& entry = theta->data()[i];
    const double saved = entry;
    entry = saved + eps;
    const double plus = inner(probe, evaluate());
    entry = saved - eps;
    const double minus = inner(probe, evaluate());
    entry = saved;

    const double numeric = (plus - minus) / (2.0 * eps);
    const double exact = analytic.data()[i];
    const double abs_err = std::abs(numeric - exact);
    const double denom = std::max({std::abs(numeric), std::abs(exact), 1e-6});
    result.max_absolute_error = std::max(result.max_absolute_error, abs_err);
    result.max_relative_error = std::max(result.max_relative_error, abs_err / denom);
    ++result.entries;
  }
  return result;
}

FeatureBundle random_bundle(const Dims& d, std::uint64_t seed) {
  detail::Rng rng(seed);
  FeatureBundle b;
  b.screen = random_matrix(d.screen_tokens, d.screen_dim, rng, 1.0);
  b.language = random_matrix(d.language_tokens, d.language_dim, rng, 1.0);
  return b;
}

FusionParams random_params(const Dims& d, std::uint64_t seed, double scale) {
  detail::Rng rng(seed);
  FusionParams p;
  p.projection = random_matrix(d.language_dim, d.screen_dim, rng, scale);
  p.gate_language = random_matrix(d.language_dim, d.language_dim, rng, scale);
  p.gate_vision = random_matrix(d.language_dim, d.language_dim, rng, scale);
  return p;
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json matrix_json(const Matrix& m) {
  ordered_json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["data"] = std::vector<double>(m.data().begin(), m.data().end());
  return j;
}

Matrix matrix_from(const nlohmann::json& j, const std::string& name) {
  auto bad = [&](const std::string& why) { dimension_error("tensor '" + name + "': " + why); };
  if (!j.is_object()) bad("expected an object");
  const auto rows = j.find("rows");
  const auto cols = j.find("cols");
  const auto data = j.find("data");
  if (rows == j.end() || cols == j.end() || data == j.end()) bad("needs rows, cols and data");
  if (!rows->is_number_unsigned() || !cols->is_number_unsigned()) bad("rows/cols must be unsigned");
  if (!data->is_array()) bad("data must be an array");
  std::vector<double> values;
  values.reserve(data->size());
  for (const auto& v : *data) {
    if (!v.is_number()) bad("data must hold numbers");
    values.push_back(v.get<double>());
  }
  const auto r = rows->get<std::size_t>();
  const auto c = cols->get<std::size_t>();
  const bool fits = (r == 0 || c == 0) ? values.empty()
                                       : values.size() % r == 0 && values.size() / r == c;
  if (!fits) bad("shape does not match data length");
  return Matrix(r, c, std::move(values));
}

nlohmann::json parse_or_throw(std::string_view text) {
  auto j = nlohmann::json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded()) dimension_error("tensor file is not valid JSON");
  if (!j.is_object()) dimension_error("tensor file must hold a JSON object");
  return j;
}

const nlohmann::json& field(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) dimension_error(std::string("missing tensor '") + key + "'");
  return *it;
}

}  // namespace

std::string to_json(const Matrix& m) { return matrix_json(m).dump(); }

Matrix matrix_from_json(std::string_view text) { return matrix_from(parse_or_throw(text), "matrix"); }

std::string to_json(const FeatureBundle& b) {
  ordered_json j;
  j["screen"] = matrix_json(b.screen);
  j["language"] = matrix_json(b.language);
  return j.dump();
}

std::string to_json(const FusionParams& p) {
  ordered_json j;
  j["projection"] = matrix_json(p.projection);
  j["gate_language"] = matrix_json(p.gate_language);
  j["gate_vision"] = matrix_json(p.gate_vision);
  return j.dump();
}

FeatureBundle bundle_from_json(std::string_view text) {
  const auto j = parse_or_throw(text);
  return FeatureBundle{matrix_from(field(j, "screen"), "screen"),
                       matrix_from(field(j, "language"), "language")};
}

FusionParams params_from_json(std::string_view text) {
  const auto j = parse_or_throw(text);
  return FusionParams{matrix_from(field(j, "projection"), "projection"),
                      matrix_from(field(j, "gate_language"), "gate_language"),
                      matrix_from(field(j, "gate_vision"), "gate_vision")};
}

}  // namespace guikit::fusion
