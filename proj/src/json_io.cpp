#include "qidlab/json_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "qidlab/errors.hpp"

namespace qidlab {

namespace {

json entries_to_json(const Mat& a) {
    std::vector<double> re, im;
    re.reserve(a.size());
    im.reserve(a.size());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            re.push_back(a(i, j).real());
            im.push_back(a(i, j).imag());
        }
    return json{{"re", re}, {"im", im}};
}

Mat entries_from_json(const json& j, Eigen::Index rows, Eigen::Index cols) {
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (static_cast<Eigen::Index>(re.size()) != rows * cols || re.size() != im.size())
        throw BadParams("matrix JSON: entry count does not match shape");
    Mat a(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index k = 0; k < cols; ++k)
            a(i, k) = cxd(re[i * cols + k].get<double>(), im[i * cols + k].get<double>());
    return a;
}

}  // namespace

json mat_to_json(const Mat& a) {
    if (a.rows() != a.cols()) throw BadParams("mat_to_json: matrix is not square");
    json j = entries_to_json(a);
    j["dim"] = a.rows();
    return j;
}

Mat mat_from_json(const json& j) {
    const auto d = j.at("dim").get<Eigen::Index>();
    if (d <= 0) throw BadParams("matrix JSON: dim must be positive");
    return entries_from_json(j, d, d);
}

json rect_to_json(const Mat& a) {
    json j = entries_to_json(a);
    j["rows"] = a.rows();
    j["cols"] = a.cols();
    return j;
}

Mat rect_from_json(const json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    if (rows <= 0 || cols <= 0) throw BadParams("matrix JSON: shape must be positive");
    return entries_from_json(j, rows, cols);
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadParams("cannot open file: " + path);
    json j;
    in >> j;
    return j;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw BadParams("cannot write file: " + path);
    out << j.dump(2) << '\n';
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw BadParams("cannot write file: " + path);
    out << text;
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

}  // namespace qidlab
