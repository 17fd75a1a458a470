#pragma once

#include <nlohmann/json.hpp>

#include "qidlab/linalg.hpp"

namespace qidlab {

using json = nlohmann::json;

// Square matrices serialize as {"dim": d, "re": [...], "im": [...]} with
// row-major double arrays at full round-trip precision.
json mat_to_json(const Mat& a);
Mat mat_from_json(const json& j);

// Rectangular blocks (Kraus operators) carry explicit shape.
json rect_to_json(const Mat& a);
Mat rect_from_json(const json& j);

json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);
void write_text_file(const std::string& path, const std::string& text);

// Locale-independent shortest round-trip formatting, '.' decimal point.
std::string format_double(double x);

}  // namespace qidlab
