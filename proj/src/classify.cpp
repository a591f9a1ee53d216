#include "fuller/classify.hpp"

#include "fuller/linalg.hpp"

#include <algorithm>
#include <type_traits>

namespace fuller {

namespace {

template <class T>
using Vec = std::vector<T>;

template <class T>
constexpr bool kExact = std::is_same_v<T, Rational>;

template <class T>
double to_double(const T& x) {
  if constexpr (kExact<T>) {
    return x.get_d();
  } else {
    return static_cast<double>(x);
  }
}

template <class T>
std::string to_text(const T& x) {
  if constexpr (kExact<T>) {
    return to_string(x);
  } else {
    return format_real(x, 20);
  }
}

real norm(const Vec<real>& v) {
  real s = 0;
  for (const auto& x : v) s += x * x;
  return sqrt(s);
}

real cross_norm(const Vec<real>& a, const Vec<real>& b) {
  const real c0 = a[1] * b[2] - a[2] * b[1];
  const real c1 = a[2] * b[0] - a[0] * b[2];
  const real c2 = a[0] * b[1] - a[1] * b[0];
  return sqrt(c0 * c0 + c1 * c1 + c2 * c2);
}

template <class T>
Vec<T> field_at(BracketCache& cache, const std::string& word, const Vec<T>& q) {
  if (word == "f0") return eval_at<T>(cache.f0(), q);
  return eval_at<T>(cache.field(BracketWord(word)), q);
}

void require_dim3(const BracketCache& cache, std::size_t point_dim) {
  if (cache.dim() != 3) throw domain_error("three-dimensional fields required");
  if (point_dim != 3) throw domain_error("point must have three coordinates");
}

template <class T>
std::size_t frame_rank(const Vec<T>& a, const Vec<T>& b, double tol) {
  if constexpr (kExact<T>) {
    (void)tol;
    return rank<Rational>({a, b});
  } else {
    const real na = norm(a), nb = norm(b);
    if (na == 0 && nb == 0) return 0;
    if (cross_norm(a, b) > real(tol) * na * nb) return 2;
    return 1;
  }
}

template <class T>
PointClass classify_impl(BracketCache& cache, const Vec<T>& q, double tol) {
  require_dim3(cache, q.size());
  const auto f1 = field_at(cache, "1", q);
  const auto f01 = field_at(cache, "01", q);
  std::vector<T> values;
  std::vector<double> volume_scale;
  for (const auto& label : wedge_labels()) {
    Vec<Vec<T>> vs;
    std::size_t start = 0;
    while (start <= label.size()) {
      std::size_t comma = label.find(',', start);
      if (comma == std::string::npos) comma = label.size();
      vs.push_back(field_at(cache, label.substr(start, comma - start), q));
      start = comma + 1;
    }
    values.push_back(wedge_det(vs));
    if constexpr (!kExact<T>) volume_scale.push_back(static_cast<double>(norm(vs[0]) * norm(vs[1]) * norm(vs[2])));
  }

  PointClass pc;
  pc.exact = kExact<T>;
  pc.tol = kExact<T> ? 0.0 : tol;
  double threshold = 0.0;
  if constexpr (!kExact<T>) {
    double largest = 0.0;
    for (const auto& v : values) largest = std::max(largest, std::abs(to_double(v)));
    for (double s : volume_scale) largest = std::max(largest, s);
    threshold = tol * largest;
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    WedgeValue wv;
    wv.label = wedge_labels()[i];
    wv.value = to_double(values[i]);
    wv.text = to_text(values[i]);
    if constexpr (kExact<T>) {
      wv.zero = values[i] == 0;
    } else {
      wv.zero = std::abs(wv.value) <= threshold;
    }
    pc.wedges.push_back(std::move(wv));
  }
  pc.rank_f1_f01 = frame_rank(f1, f01, tol);
  pc.rank_f0_f1 = frame_rank(field_at(cache, "f0", q), f1, tol);

  auto nz = [&](const char* label) { return !pc.wedge(label).zero; };
  auto z = [&](const char* label) { return pc.wedge(label).zero; };
  const bool frame = pc.rank_f1_f01 == 2;
  pc.a[0] = nz("1,01,+01") && nz("1,01,-01");
  pc.a[1] = z("1,01,+01") && nz("1,01,++01") && nz("1,01,-01");
  pc.a[2] = z("1,01,-01") && nz("1,01,--01") && nz("1,01,+01");
  pc.a[3] = z("1,01,+01") && z("1,01,++01") && nz("1,01,+++01") && nz("1,01,-01");
  pc.a[4] = z("1,01,-01") && z("1,01,--01") && nz("1,01,---01") && nz("1,01,+01");
  pc.a[5] = !frame && nz("1,+01,-01") && nz("1,+01,++01") && nz("1,-01,--01");
  pc.w = z("1,01,+01") && z("1,01,-01") && frame;
  pc.c = pc.rank_f0_f1 <= 1;
  return pc;
}

}  // namespace

const WedgeValue& PointClass::wedge(const std::string& label) const {
  for (const auto& w : wedges)
    if (w.label == label) return w;
  throw domain_error("unknown wedge label " + label);
}

const std::vector<std::string>& wedge_labels() {
  static const std::vector<std::string> labels = {
      "1,01,+01", "1,01,-01",  "1,01,++01",  "1,01,--01",  "1,01,+++01",
      "1,01,---01", "1,+01,-01", "1,+01,++01", "1,-01,--01",
  };
  return labels;
}

PointClass classify_point_3d(BracketCache& cache, const std::vector<Rational>& q) {
  return classify_impl<Rational>(cache, q, 0.0);
}

PointClass classify_point_3d(BracketCache& cache, const RealVector& q, double tol) {
  return classify_impl<real>(cache, q, tol);
}

namespace {

/// det[f1, ad_g f1, ..., ad_g^(n-1) f1](q) for g = f0 + a f1.
template <class T>
T ad_chain_determinant(BracketCache& cache, const Vec<T>& q, const Rational& a, double* volume) {
  const PolyVectorField g = cache.f0() + cache.f1() * a;
  PolyVectorField v = cache.f1();
  Vec<Vec<T>> cols;
  for (std::size_t i = 0; i < cache.dim(); ++i) {
    if (i > 0) v = lie_bracket(g, v);
    cols.push_back(eval_at<T>(v, q));
  }
  if constexpr (!kExact<T>) {
    real prod = 1;
    for (const auto& c : cols) prod *= norm(c);
    *volume = static_cast<double>(prod);
  } else {
    (void)volume;
  }
  return wedge_det(cols);
}

}  // namespace

CollinearTest collinear_degeneracy_test(BracketCache& cache, const std::vector<Rational>& q) {
  if (q.size() != cache.dim()) throw domain_error("point dimension does not match the fields");
  const auto f0 = eval_at<Rational>(cache.f0(), q);
  const auto f1 = eval_at<Rational>(cache.f1(), q);
  const auto f01 = eval_at<Rational>(cache.field(BracketWord("01")), q);
  CollinearTest out;
  out.in_l1 = rank<Rational>({f0, f1, f01}) <= 1;

  auto pivot = std::find_if(f1.begin(), f1.end(), [](const Rational& x) { return x != 0; });
  if (pivot == f1.end()) return out;
  const Rational a = f0[pivot - f1.begin()] / *pivot;
  for (std::size_t i = 0; i < f0.size(); ++i)
    if (f0[i] != a * f1[i]) return out;
  out.a = a;
  out.determinant = ad_chain_determinant<Rational>(cache, q, a, nullptr);
  out.in_l2 = *out.determinant == 0;
  return out;
}

CollinearTest collinear_degeneracy_test(BracketCache& cache, const RealVector& q, double tol) {
  if (q.size() != cache.dim()) throw domain_error("point dimension does not match the fields");
  const auto f0 = eval_at<real>(cache.f0(), q);
  const auto f1 = eval_at<real>(cache.f1(), q);
  const auto f01 = eval_at<real>(cache.field(BracketWord("01")), q);
  CollinearTest out;
  out.in_l1 = rank<real>({f0, f1, f01}, tol) <= 1;

  const real n0 = norm(f0), n1 = norm(f1);
  if (n1 == 0 || n1 <= real(tol) * n0) return out;
  real dot = 0;
  for (std::size_t i = 0; i < f0.size(); ++i) dot += f0[i] * f1[i];
  const real a = dot / (n1 * n1);
  real resid = 0;
  for (std::size_t i = 0; i < f0.size(); ++i) resid += (f0[i] - a * f1[i]) * (f0[i] - a * f1[i]);
  if (sqrt(resid) > real(tol) * std::max(n0, n1)) return out;
  out.a = to_rational(a);
  double volume = 0.0;
  const real det = ad_chain_determinant<real>(cache, q, *out.a, &volume);
  out.determinant = to_rational(det);
  out.in_l2 = abs(det) <= real(tol) * real(volume);
  return out;
}

std::vector<Rational> collinear_order_chain(BracketCache& cache, const std::vector<Rational>& q, const Rational& a,
                                            const std::vector<Rational>& lambda, unsigned k) {
  if (a < -1 || a > 1) throw domain_error("collinear_order_chain needs a in [-1, 1]");
  if (q.size() != cache.dim() || lambda.size() != cache.dim())
    throw domain_error("point dimension does not match the fields");
  if (std::all_of(lambda.begin(), lambda.end(), [](const Rational& x) { return x == 0; }))
    throw domain_error("collinear_order_chain needs a nonzero covector");
  const PolyVectorField g = cache.f0() + cache.f1() * a;
  PolyVectorField v = cache.f1();
  std::vector<Rational> out;
  for (unsigned j = 0; j <= k + 2; ++j) {
    if (j > 0) v = lie_bracket(g, v);
    out.push_back(pairing(lambda, eval_at<Rational>(v, q)));
  }
  return out;
}

std::string to_string(DesttBranch b) {
  switch (b) {
    case DesttBranch::h0101_zero:
      return "h0101-zero";
    case DesttBranch::determinant_zero:
      return "determinant-zero";
    case DesttBranch::none:
      return "none";
  }
  return "?";
}

DesttReport destt_test(BracketCache& cache, const std::vector<Rational>& q, const std::vector<Rational>& lambda) {
  require_dim3(cache, q.size());
  if (lambda.size() != 3) throw domain_error("covector must have three coordinates");
  if (std::all_of(lambda.begin(), lambda.end(), [](const Rational& x) { return x == 0; }))
    throw domain_error("destt_test needs a nonzero covector");
  auto h = [&](const char* w) { return pairing(lambda, eval_at<Rational>(cache.field(BracketWord(w)), q)); };
  const Rational h0101 = h("0101");
  const Rational comb = h("0001") * h("1101") - h0101 * h0101;
  DesttReport r;
  r.h0101 = h0101.get_d();
  r.combination = comb.get_d();
  r.h0101_text = to_string(h0101);
  r.combination_text = to_string(comb);
  if (h0101 == 0) {
    r.branch = DesttBranch::h0101_zero;
  } else if (comb == 0) {
    r.branch = DesttBranch::determinant_zero;
  }
  return r;
}

DesttReport destt_test(const ExtremalState& state, BracketCache& cache, double tol) {
  require_dim3(cache, state.q.size());
  real lambda_norm = norm(state.lambda);
  if (lambda_norm == 0) throw domain_error("destt_test needs a nonzero covector");
  auto h = [&](const char* w) { return cache.numeric(BracketWord(w)).paired(state.q, state.lambda); };
  const real h0101 = h("0101");
  const real prod = h("0001") * h("1101");
  const real comb = prod - h0101 * h0101;
  const real f_norm = norm(cache.numeric(BracketWord("0101")).value(state.q));
  DesttReport r;
  r.h0101 = static_cast<double>(h0101);
  r.combination = static_cast<double>(comb);
  r.h0101_text = format_real(h0101, 20);
  r.combination_text = format_real(comb, 20);
  if (abs(h0101) <= real(tol) * lambda_norm * f_norm) {
    r.branch = DesttBranch::h0101_zero;
  } else if (abs(comb) <= real(tol) * std::max(abs(prod), h0101 * h0101)) {
    r.branch = DesttBranch::determinant_zero;
  }
  return r;
}

}  // namespace fuller
