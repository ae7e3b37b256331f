#include "geomred/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace geomred::io {

json to_json(const Mat& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

json to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

namespace {

double number(const json& x, const char* what) {
  if (!x.is_number()) throw Error(ErrorCode::InvalidInput, std::string(what) + ": expected a number");
  const double d = x.get<double>();
  if (!std::isfinite(d)) throw Error(ErrorCode::NonFinite, std::string(what) + " is not finite");
  return d;
}

}  // namespace

Mat mat_from_json(const json& j, const char* what) {
  if (j.is_array()) {
    // nested rows
    const auto r = static_cast<Eigen::Index>(j.size());
    if (r == 0) return Mat(0, 0);
    if (!j[0].is_array()) throw Error(ErrorCode::InvalidInput, std::string(what) + ": expected rows");
    const auto c = static_cast<Eigen::Index>(j[0].size());
    Mat m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
      if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != c)
        throw Error(ErrorCode::ShapeMismatch, std::string(what) + ": ragged rows");
      for (Eigen::Index k = 0; k < c; ++k) m(i, k) = number(j[i][k], what);
    }
    return m;
  }
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw Error(ErrorCode::InvalidInput, std::string(what) + ": expected {rows, cols, data}");
  if (!j["rows"].is_number_unsigned() || !j["cols"].is_number_unsigned() || !j["data"].is_array())
    throw Error(ErrorCode::InvalidInput, std::string(what) + ": malformed matrix");
  const auto r = j["rows"].get<Eigen::Index>(), c = j["cols"].get<Eigen::Index>();
  if (static_cast<Eigen::Index>(j["data"].size()) != r * c)
    throw Error(ErrorCode::ShapeMismatch, std::string(what) + ": data length is not rows*cols");
  Mat m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index k = 0; k < c; ++k) m(i, k) = number(j["data"][i * c + k], what);
  return m;
}

Vec vec_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidInput, std::string(what) + ": expected an array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = number(j[i], what);
  return v;
}

cplx cplx_from_json(const json& j, const char* what) {
  if (j.is_number()) return {number(j, what), 0.0};
  if (!j.is_array() || j.size() != 2)
    throw Error(ErrorCode::InvalidInput, std::string(what) + ": expected [re, im]");
  return {number(j[0], what), number(j[1], what)};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string num(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + p.string());
  out << content;
  if (!out) throw Error(ErrorCode::InvalidInput, "write failed for " + p.string());
}

}  // namespace geomred::io
