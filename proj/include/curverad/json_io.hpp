#pragma once

#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "curverad/closed_forms.hpp"
#include "curverad/invariance.hpp"

namespace curverad {

using CurveVariant = std::variant<Curve<2>, Curve<3>>;

namespace detail {

template <std::size_t N>
inline Vec<N> vec_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != N)
    throw std::invalid_argument(std::string(what) + ": expected array of " +
                                std::to_string(N) + " numbers");
  Vec<N> v;
  for (std::size_t i = 0; i < N; ++i) v[i] = j.at(i).get<double>();
  return v;
}

template <std::size_t N>
inline Mat<N> mat_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != N)
    throw std::invalid_argument("rotate: expected " + std::to_string(N) + " rows");
  Mat<N> m;
  for (std::size_t i = 0; i < N; ++i)
    m.row[i] = vec_from_json<N>(j.at(i), "rotate row");
  return m;
}

}  // namespace detail

/// One transform op object, the same grammar the "transformed" curve kind
/// uses in its ops list:
///   {"invert":{"center":[...]}} | {"rotate": angle|matrix} |
///   {"scale": s} | {"translate":[...]} | {"reparam":{"amplitude": a}}
template <std::size_t N>
inline CurveTransform<N> parse_transform_op(const nlohmann::json& op) {
  if (!op.is_object() || op.size() != 1)
    throw std::invalid_argument("transform op: expected single-key object");
  const auto it = op.begin();
  const std::string& key = it.key();
  const nlohmann::json& value = it.value();
  if (key == "invert")
    return InvertOp<N>{detail::vec_from_json<N>(value.at("center"), "invert center")};
  if (key == "translate")
    return TranslateOp<N>{detail::vec_from_json<N>(value, "translate")};
  if (key == "scale") return ScaleOp<N>{value.get<double>()};
  if (key == "reparam") return ReparamOp<N>{value.at("amplitude").get<double>()};
  if (key == "rotate") {
    if (value.is_number()) {
      if constexpr (N == 2) {
        return RotateOp<N>{rotation2d(value.get<double>())};
      } else {
        throw std::invalid_argument(
            "rotate: scalar angle only valid for plane curves");
      }
    }
    return RotateOp<N>{detail::mat_from_json<N>(value)};
  }
  throw std::invalid_argument("transform op: unknown key '" + key + "'");
}

namespace detail {

template <std::size_t N>
inline Curve<N> parse_fourier(const nlohmann::json& j) {
  FourierCurve<N> fc;
  if (j.contains("cos")) {
    const auto& c = j.at("cos");
    for (std::size_t k = 0; k < N && k < c.size(); ++k)
      fc.cos_coeff[k] = c.at(k).get<std::vector<double>>();
  }
  if (j.contains("sin")) {
    const auto& s = j.at("sin");
    for (std::size_t k = 0; k < N && k < s.size(); ++k)
      fc.sin_coeff[k] = s.at(k).get<std::vector<double>>();
  }
  return fc.to_curve();
}

inline std::size_t fourier_dimension(const nlohmann::json& j) {
  std::size_t dim = 0;
  if (j.contains("cos")) dim = std::max(dim, j.at("cos").size());
  if (j.contains("sin")) dim = std::max(dim, j.at("sin").size());
  if (dim < 2 || dim > 3)
    throw std::invalid_argument(
        "fourier: need 2 or 3 per-coordinate coefficient lists");
  return dim;
}

}  // namespace detail

/// Parses the curve-spec JSON grammar:
///   {"kind":"circle","r":1.0}
///   {"kind":"ellipse","a":2.0,"b":1.0}
///   {"kind":"fourier","cos":[[...],[...]],"sin":[[...],[...]]}
///   {"kind":"transformed","base":<spec>,"ops":[<op>,...]}  (ops in order)
inline CurveVariant parse_curve_spec(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw std::invalid_argument("curve spec: missing \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "circle") return make_circle(j.at("r").get<double>());
  if (kind == "ellipse")
    return make_ellipse(j.at("a").get<double>(), j.at("b").get<double>());
  if (kind == "fourier") {
    if (detail::fourier_dimension(j) == 2) return detail::parse_fourier<2>(j);
    return detail::parse_fourier<3>(j);
  }
  if (kind == "transformed") {
    CurveVariant base = parse_curve_spec(j.at("base"));
    for (const auto& op : j.at("ops")) {
      base = std::visit(
          [&](const auto& c) -> CurveVariant {
            constexpr std::size_t N = std::decay_t<decltype(c)>::dimension;
            return apply_transform(c, parse_transform_op<N>(op));
          },
          base);
    }
    return base;
  }
  throw std::invalid_argument("curve spec: unknown kind '" + kind + "'");
}

/// Reference value when the descriptor identifies a circle or ellipse.
inline std::optional<double> closed_form_value(const CurveDescriptor& d) {
  if (d.kind == CurveKind::Circle) return n_circle();
  if (d.kind == CurveKind::Ellipse) return n_ellipse(d.b / d.a);
  return std::nullopt;
}

inline nlohmann::json invariance_report_json(const InvarianceReport& r) {
  return nlohmann::json{{"transform", r.transform}, {"n_before", r.n_before},
                        {"n_after", r.n_after},     {"abs_dev", r.abs_dev},
                        {"rel_dev", r.rel_dev},     {"pass", r.pass}};
}

}  // namespace curverad
