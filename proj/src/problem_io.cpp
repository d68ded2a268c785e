#include "gcrf/problem_io.hpp"

#include <cmath>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace gcrf {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what)
{
  throw schema_error(path + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& path)
{
  const auto it = obj.find(key);
  if (it == obj.end())
    fail(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

long long as_int(const json& v, const std::string& path)
{
  if (!v.is_number_integer())
    fail(path, "expected an integer");
  return v.get<long long>();
}

double as_number(const json& v, const std::string& path)
{
  if (!v.is_number())
    fail(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d))
    fail(path, "expected a finite number");
  return d;
}

std::vector<double> as_vector(const json& v, std::size_t expected, const std::string& path)
{
  if (!v.is_array())
    fail(path, "expected an array");
  if (expected != 0 && v.size() != expected)
    fail(path, "expected " + std::to_string(expected) + " entries, got " + std::to_string(v.size()));
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Matrix as_matrix(const json& v, std::size_t rows, std::size_t cols, const std::string& path)
{
  if (!v.is_array() || v.size() != rows)
    fail(path, "expected " + std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
  std::vector<double> data;
  data.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto row = as_vector(v[r], cols, path + "[" + std::to_string(r) + "]");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(rows, cols, std::move(data));
}

json matrix_json(const Matrix& m)
{
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r)
    rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
  return rows;
}

}

CrfGraph ProblemFile::graph() const
{
  std::vector<Edge> e;
  e.reserve(edges.size());
  for (const auto& entry : edges)
    e.push_back(entry.edge);
  return CrfGraph(num_nodes, num_labels, std::move(e));
}

Potentials ProblemFile::potentials() const
{
  Potentials p{unary, {}};
  p.pairwise.reserve(edges.size());
  for (const auto& entry : edges)
    p.pairwise.push_back(entry.psi);
  return p;
}

ProblemFile parse_problem(const std::string& text)
{
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw schema_error(std::string("parse error: ") + e.what());
  }
  if (!doc.is_object())
    fail("<root>", "expected an object");

  const long long version = as_int(field(doc, "version", ""), "version");
  if (version != problem_schema_version)
    fail("version", "unsupported version " + std::to_string(version));

  ProblemFile p;
  const long long k = as_int(field(doc, "num_labels", ""), "num_labels");
  const long long n = as_int(field(doc, "num_nodes", ""), "num_nodes");
  if (k < 2)
    fail("num_labels", "must be at least 2");
  if (n < 1)
    fail("num_nodes", "must be at least 1");
  p.num_labels = static_cast<int>(k);
  p.num_nodes = static_cast<int>(n);
  p.unary = as_matrix(field(doc, "unary", ""), n, k, "unary");

  const json& edges = field(doc, "edges", "");
  if (!edges.is_array())
    fail("edges", "expected an array");
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const std::string path = "edges[" + std::to_string(e) + "]";
    const json& entry = edges[e];
    if (!entry.is_object())
      fail(path, "expected an object");
    ProblemFile::EdgeEntry out;
    const long long i = as_int(field(entry, "i", path), path + ".i");
    const long long j = as_int(field(entry, "j", path), path + ".j");
    if (i < 0 || i >= n)
      fail(path + ".i", "node index out of range");
    if (j < 0 || j >= n)
      fail(path + ".j", "node index out of range");
    out.edge = {static_cast<int>(i), static_cast<int>(j)};
    const bool has_psi = entry.contains("psi");
    const bool has_dis = entry.contains("dis");
    if (has_psi == has_dis)
      fail(path, "expected exactly one of \"psi\" or \"dis\"");
    if (has_psi) {
      out.psi = as_matrix(entry["psi"], k, k, path + ".psi");
    } else {
      const double dis = as_number(entry["dis"], path + ".dis");
      if (dis < 0.0 || dis > 1.0)
        fail(path + ".dis", "must lie in [0, 1]");
      out.dis = dis;
      out.psi = pairwise_potential(dis, p.num_labels);
    }
    p.edges.push_back(std::move(out));
  }

  if (const auto it = doc.find("constraints"); it != doc.end() && !it->is_null()) {
    if (!it->is_array())
      fail("constraints", "expected an array of node lists");
    for (std::size_t c = 0; c < it->size(); ++c) {
      const std::string path = "constraints[" + std::to_string(c) + "]";
      const json& set = (*it)[c];
      if (!set.is_array())
        fail(path, "expected an array of node indices");
      std::vector<int> nodes;
      for (std::size_t m = 0; m < set.size(); ++m)
        nodes.push_back(static_cast<int>(as_int(set[m], path + "[" + std::to_string(m) + "]")));
      p.constraints.sets.push_back(std::move(nodes));
    }
    try {
      p.constraints.validate(p.num_nodes);
    } catch (const contract_error& e) {
      fail("constraints", e.what());
    }
  }

  if (const auto it = doc.find("features"); it != doc.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != static_cast<std::size_t>(n))
      fail("features", "expected one entry per node");
    for (std::size_t f = 0; f < it->size(); ++f) {
      const std::string path = "features[" + std::to_string(f) + "]";
      const json& entry = (*it)[f];
      if (!entry.is_object())
        fail(path, "expected an object");
      NodeFeatures nf;
      const auto c = as_vector(field(entry, "centroid", path), 2, path + ".centroid");
      const auto m = as_vector(field(entry, "mean_color", path), 3, path + ".mean_color");
      nf.centroid = {c[0], c[1]};
      nf.mean_color = {m[0], m[1], m[2]};
      nf.histogram = as_vector(field(entry, "histogram", path), 0, path + ".histogram");
      if (nf.histogram.empty())
        fail(path + ".histogram", "must not be empty");
      for (double v : nf.histogram)
        if (v < 0.0)
          fail(path + ".histogram", "entries must be nonnegative");
      p.features.push_back(std::move(nf));
    }
  }

  try {
    p.potentials().validate(p.graph());
  } catch (const contract_error& e) {
    fail("edges", e.what());
  }
  return p;
}

ProblemFile read_problem(std::istream& in)
{
  return parse_problem(std::string(std::istreambuf_iterator<char>(in), {}));
}

std::string serialize_problem(const ProblemFile& p)
{
  json doc;
  doc["version"] = problem_schema_version;
  doc["num_labels"] = p.num_labels;
  doc["num_nodes"] = p.num_nodes;
  doc["unary"] = matrix_json(p.unary);
  json edges = json::array();
  for (const auto& e : p.edges) {
    json entry{{"i", e.edge.i}, {"j", e.edge.j}};
    if (e.dis)
      entry["dis"] = *e.dis;
    else
      entry["psi"] = matrix_json(e.psi);
    edges.push_back(std::move(entry));
  }
  doc["edges"] = std::move(edges);
  doc["constraints"] = p.constraints.sets;
  if (!p.features.empty()) {
    json features = json::array();
    for (const auto& f : p.features)
      features.push_back({{"centroid", f.centroid}, {"mean_color", f.mean_color}, {"histogram", f.histogram}});
    doc["features"] = std::move(features);
  }
  return doc.dump() + "\n";
}

ProblemFile make_problem(const CrfGraph& graph, const Potentials& potentials, const ConstraintSets& constraints,
                         const std::vector<NodeFeatures>& features, const std::vector<double>& dissimilarity)
{
  potentials.validate(graph);
  constraints.validate(graph.num_nodes());
  if (!dissimilarity.empty() && dissimilarity.size() != graph.num_edges())
    throw contract_error("make_problem: one dissimilarity per edge required");
  if (!features.empty() && features.size() != static_cast<std::size_t>(graph.num_nodes()))
    throw contract_error("make_problem: one feature entry per node required");

  ProblemFile p;
  p.num_labels = graph.num_labels();
  p.num_nodes = graph.num_nodes();
  p.unary = potentials.unary;
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    ProblemFile::EdgeEntry entry{graph.edges()[e], potentials.pairwise[e], std::nullopt};
    if (!dissimilarity.empty()) {
      entry.dis = dissimilarity[e];
      entry.psi = pairwise_potential(dissimilarity[e], graph.num_labels());
    }
    p.edges.push_back(std::move(entry));
  }
  p.constraints = constraints;
  p.features = features;
  return p;
}

Labeling read_labeling(std::istream& in)
{
  Labeling out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    std::istringstream ss(line);
    long long label;
    std::string extra;
    if (!(ss >> label) || (ss >> extra) || label < 0)
      throw schema_error("labeling line " + std::to_string(line_no) + ": expected a nonnegative label index");
    out.labels.push_back(static_cast<int>(label));
  }
  return out;
}

void write_labeling(std::ostream& out, const Labeling& labeling)
{
  for (int label : labeling.labels)
    out << label << '\n';
}

}
