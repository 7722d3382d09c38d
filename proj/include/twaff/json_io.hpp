#pragma once

#include "twaff/affine.hpp"
#include "twaff/folding.hpp"
#include "twaff/orbits.hpp"

#include <json.hpp>

#include <string>

namespace twaff {

using Json = nlohmann::ordered_json;

/// Rationals travel as "p/q" strings so that exact data survives the round trip.
Json to_json(const Rational& q);
Json to_json(const QVector& v);
Json to_json(const cplx& z);  // [re, im]
Json to_json(const Eigen::VectorXd& v);
Json to_json(const FoldedData& fd);
Json to_json(const AlcoveClass& c);

Rational rational_from_json(const Json& j);
QVector qvector_from_json(const Json& j);

/// {"n", "r", "b", "a_coeff", "grid", "samples": [[[re, im], ...] row-major per matrix]}
Json loop_to_json(const TwistedLoop& loop);
TwistedLoop loop_from_json(const Json& j);

/// Flat CSV of a JSON object: one "key,value" row per scalar leaf, nested keys joined by '.'.
std::string json_to_csv(const Json& j);

}  // namespace twaff
