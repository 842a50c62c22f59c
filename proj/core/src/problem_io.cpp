#include "sepwave/problem_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "sepwave/errors.hpp"

namespace sepwave::io {

using nlohmann::json;

namespace {

[[noreturn]] void shape_error(const std::string& key, const std::string& expected) {
  throw Error(ErrorKind::ShapeError, "\"" + key + "\": expected " + expected);
}

double read_real(const json& value, const std::string& key) {
  if (!value.is_number()) {
    throw Error(ErrorKind::ParseError, "\"" + key + "\": expected a number");
  }
  const double out = value.get<double>();
  if (!std::isfinite(out)) {
    throw Error(ErrorKind::NonFiniteValue, "\"" + key + "\": value is not finite");
  }
  return out;
}

Complex read_complex(const json& value, const std::string& key) {
  if (value.is_number()) {
    return {read_real(value, key), 0.0};
  }
  if (value.is_array() && value.size() == 2) {
    return {read_real(value[0], key), read_real(value[1], key)};
  }
  throw Error(ErrorKind::ParseError, "\"" + key + "\": expected a number or a [re, im] pair");
}

const json& require(const json& doc, const std::string& key) {
  const auto it = doc.find(key);
  if (it == doc.end()) {
    throw Error(ErrorKind::ParseError, "missing key \"" + key + "\"");
  }
  return *it;
}

int read_int(const json& doc, const std::string& key) {
  const json& value = require(doc, key);
  if (!value.is_number_integer()) {
    throw Error(ErrorKind::ParseError, "\"" + key + "\": expected an integer");
  }
  return value.get<int>();
}

CMatrix read_matrix(const json& doc, const std::string& key, Index m) {
  const json& value = require(doc, key);
  const std::string shape = std::to_string(m) + "x" + std::to_string(m) + " matrix";
  if (!value.is_array() || static_cast<Index>(value.size()) != m) {
    shape_error(key, shape);
  }
  CMatrix out(m, m);
  for (Index i = 0; i < m; ++i) {
    const json& row = value[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != m) {
      shape_error(key, shape);
    }
    for (Index j = 0; j < m; ++j) {
      out(i, j) = read_complex(row[static_cast<std::size_t>(j)], key);
    }
  }
  return out;
}

std::vector<CVector> read_grid_function(const json& doc, const std::string& key, int N, Index m) {
  const json& value = require(doc, key);
  const std::string shape = std::to_string(N + 1) + " vectors of length " + std::to_string(m);
  if (!value.is_array() || static_cast<int>(value.size()) != N + 1) {
    shape_error(key, shape);
  }
  std::vector<CVector> out;
  out.reserve(value.size());
  for (const json& node : value) {
    if (!node.is_array() || static_cast<Index>(node.size()) != m) {
      shape_error(key, shape);
    }
    CVector v(m);
    for (Index c = 0; c < m; ++c) {
      v(c) = read_complex(node[static_cast<std::size_t>(c)], key);
    }
    out.push_back(v);
  }
  return out;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const CMatrix& mat) {
  json out = json::array();
  for (Index i = 0; i < mat.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < mat.cols(); ++j) {
      row.push_back(complex_json(mat(i, j)));
    }
    out.push_back(row);
  }
  return out;
}

json grid_json(const std::vector<CVector>& values) {
  json out = json::array();
  for (const CVector& v : values) {
    json node = json::array();
    for (Index c = 0; c < v.size(); ++c) {
      node.push_back(complex_json(v(c)));
    }
    out.push_back(node);
  }
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) {
    out.push_back(cell);
  }
  return out;
}

double parse_cell(const std::string& cell) {
  double value = 0.0;
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::ParseError, "bad numeric CSV cell \"" + cell + "\"");
  }
  return value;
}

}  // namespace

ProblemSpec parse_problem_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorKind::ParseError, "problem file must be a JSON object");
  }
  ProblemSpec spec;
  const int m = read_int(doc, "m");
  if (m < 1) {
    throw Error(ErrorKind::InvalidParameter, "\"m\": must be >= 1");
  }
  spec.m = m;
  spec.E = read_matrix(doc, "E", m);
  spec.A = read_matrix(doc, "A", m);
  spec.A1 = read_matrix(doc, "A1", m);
  spec.A2 = read_matrix(doc, "A2", m);
  spec.B1 = read_matrix(doc, "B1", m);
  spec.B2 = read_matrix(doc, "B2", m);
  spec.alpha = read_real(require(doc, "alpha"), "alpha");
  spec.beta = read_real(require(doc, "beta"), "beta");
  const int N = read_int(doc, "N");
  spec.grid = make_grid(N, read_real(require(doc, "k"), "k"), read_real(require(doc, "T"), "T"));
  spec.F = read_grid_function(doc, "F", N, m);
  spec.G = read_grid_function(doc, "G", N, m);
  if (const auto it = doc.find("gamma"); it != doc.end() && !it->is_null()) {
    spec.gamma = read_complex(*it, "gamma");
  }
  if (const auto it = doc.find("tolerances"); it != doc.end()) {
    if (!it->is_object()) {
      throw Error(ErrorKind::ParseError, "\"tolerances\": expected an object");
    }
    for (const auto& [key, value] : it->items()) {
      const double v = read_real(value, "tolerances." + key);
      if (key == "rank") {
        spec.tol.rank = v;
      } else if (key == "residual") {
        spec.tol.residual = v;
      } else if (key == "consistency") {
        spec.tol.consistency = v;
      } else if (key == "max_condition") {
        spec.tol.max_condition = v;
      } else {
        throw Error(ErrorKind::ParseError, "\"tolerances\": unknown key \"" + key + "\"");
      }
    }
  }
  if (const auto it = doc.find("rho_override"); it != doc.end() && !it->is_null()) {
    std::vector<double> rhos;
    if (it->is_number()) {
      rhos.assign(static_cast<std::size_t>(N - 1), read_real(*it, "rho_override"));
    } else if (it->is_array()) {
      for (const json& v : *it) {
        rhos.push_back(read_real(v, "rho_override"));
      }
    } else {
      throw Error(ErrorKind::ParseError, "\"rho_override\": expected a number or an array");
    }
    spec.rho_override = rhos;
  }
  spec.validate();
  return spec;
}

ProblemSpec parse_problem(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::IoError, "cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem_text(buf.str());
}

std::string serialize_problem(const ProblemSpec& spec) {
  json doc;
  doc["m"] = spec.m;
  doc["E"] = matrix_json(spec.E);
  doc["A"] = matrix_json(spec.A);
  doc["A1"] = matrix_json(spec.A1);
  doc["A2"] = matrix_json(spec.A2);
  doc["B1"] = matrix_json(spec.B1);
  doc["B2"] = matrix_json(spec.B2);
  doc["alpha"] = spec.alpha;
  doc["beta"] = spec.beta;
  doc["N"] = spec.grid.N;
  doc["k"] = spec.grid.k;
  doc["T"] = spec.grid.T;
  doc["F"] = grid_json(spec.F);
  doc["G"] = grid_json(spec.G);
  if (spec.gamma) {
    doc["gamma"] = complex_json(*spec.gamma);
  }
  doc["tolerances"] = {{"rank", spec.tol.rank},
                       {"residual", spec.tol.residual},
                       {"consistency", spec.tol.consistency},
                       {"max_condition", spec.tol.max_condition}};
  if (spec.rho_override) {
    doc["rho_override"] = *spec.rho_override;
  }
  // One key per line with compact values keeps fixture files readable.
  static const char* const order[] = {"m", "N", "k", "T", "alpha", "beta", "gamma", "rho_override", "tolerances",
                                      "E", "A", "A1", "A2", "B1", "B2", "F", "G"};
  std::string out = "{\n";
  bool first = true;
  for (const char* key : order) {
    if (!doc.contains(key)) {
      continue;
    }
    out += first ? "" : ",\n";
    out += "  \"" + std::string(key) + "\": " + doc[key].dump();
    first = false;
  }
  return out + "\n}\n";
}

void write_problem(const ProblemSpec& spec, const std::filesystem::path& path) {
  write_text(path, serialize_problem(spec));
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) {
    throw Error(ErrorKind::IoError, "cannot format number");
  }
  return std::string(buf, ptr);
}

std::string solution_csv(const SolutionGrid& u, const GridParams& grid) {
  std::string out = "i,j,x,t";
  for (Index c = 1; c <= u.m(); ++c) {
    out += ",u" + std::to_string(c) + "_re,u" + std::to_string(c) + "_im";
  }
  out += '\n';
  for (int j = 0; j <= u.M(); ++j) {
    for (int i = 0; i <= u.N(); ++i) {
      out += std::to_string(i) + ',' + std::to_string(j) + ',' + format_double(grid.x(i)) + ',' +
             format_double(grid.t(j));
      const auto node = u.node(i, j);
      for (Index c = 0; c < u.m(); ++c) {
        out += ',' + format_double(node(c).real()) + ',' + format_double(node(c).imag());
      }
      out += '\n';
    }
  }
  return out;
}

void write_solution_csv(const SolutionGrid& u, const GridParams& grid, const std::filesystem::path& path) {
  write_text(path, solution_csv(u, grid));
}

SolutionGrid read_solution_csv(const std::filesystem::path& path, const GridParams& grid, Index m) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::IoError, "cannot open " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorKind::ParseError, path.string() + " is empty");
  }
  const auto columns = static_cast<std::size_t>(4 + 2 * m);
  if (split(line, ',').size() != columns) {
    throw Error(ErrorKind::ShapeError, "solution CSV header has the wrong number of columns for m = " +
                                           std::to_string(m));
  }
  SolutionGrid u(grid.N, grid.M, m);
  std::vector<bool> seen(static_cast<std::size_t>((grid.N + 1) * (grid.M + 1)), false);
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != columns) {
      throw Error(ErrorKind::ParseError, "solution CSV row has " + std::to_string(cells.size()) + " cells");
    }
    const double i_val = parse_cell(cells[0]);
    const double j_val = parse_cell(cells[1]);
    const int i = static_cast<int>(i_val);
    const int j = static_cast<int>(j_val);
    if (i != i_val || j != j_val || i < 0 || i > grid.N || j < 0 || j > grid.M) {
      throw Error(ErrorKind::ShapeError, "solution CSV node (" + cells[0] + ", " + cells[1] + ") is off the grid");
    }
    CVector value(m);
    for (Index c = 0; c < m; ++c) {
      const auto base = static_cast<std::size_t>(4 + 2 * c);
      value(c) = Complex(parse_cell(cells[base]), parse_cell(cells[base + 1]));
    }
    u.set(i, j, value);
    seen[static_cast<std::size_t>(j * (grid.N + 1) + i)] = true;
  }
  for (bool s : seen) {
    if (!s) {
      throw Error(ErrorKind::ShapeError, "solution CSV does not cover every grid node");
    }
  }
  return u;
}

std::string eigen_csv(const std::vector<sturm_liouville::EigenPair>& pairs) {
  std::string out = "l,lambda\n";
  for (std::size_t l = 0; l < pairs.size(); ++l) {
    out += std::to_string(l + 1) + ',' + format_double(pairs[l].lambda) + '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorKind::IoError, "cannot write " + path.string());
  }
  out << content;
  if (!out) {
    throw Error(ErrorKind::IoError, "write failed for " + path.string());
  }
}

}  // namespace sepwave::io
