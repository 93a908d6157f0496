// Copyright 2026 The qcausal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qcausal/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qcausal/error.hpp"

namespace qcausal {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing '") + key + "'");
  return *it;
}

std::size_t positive(const json& v, const std::string& where) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) fail(where, "expected a positive integer");
  const auto x = v.get<long long>();
  if (x < 1) fail(where, "expected a positive integer");
  return static_cast<std::size_t>(x);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(where, "non-finite number");
  return x;
}

cplx complex_pair(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) fail(where, "expected [re, im]");
  return {number(v[0], where + "[0]"), number(v[1], where + "[1]")};
}

std::string at(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

json complex_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

}  // namespace

std::vector<std::string> ProcessFile::node_names() const {
  std::vector<std::string> out;
  if (quantum)
    for (const auto& n : quantum->nodes()) out.push_back(n.name);
  if (classical)
    for (const auto& n : classical->nodes()) out.push_back(n.name);
  return out;
}

ProcessFile parse_process_file(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) fail("$", "expected an object");
  const json& ver = field(doc, "format_version", "$");
  if (!ver.is_number_integer() || ver.get<int>() != kFormatVersion)
    fail("$.format_version", "unsupported version");

  const json& jn = field(doc, "nodes", "$");
  if (!jn.is_array() || jn.empty()) fail("$.nodes", "expected a non-empty array");
  std::vector<QuantumNode> qnodes;
  std::vector<ClassicalNode> cnodes;
  std::string kind;
  for (std::size_t i = 0; i < jn.size(); ++i) {
    const std::string w = at("$.nodes", i);
    const json& name = field(jn[i], "name", w);
    if (!name.is_string() || name.get<std::string>().empty()) fail(w + ".name", "expected a name");
    const std::size_t din = positive(field(jn[i], "d_in", w), w + ".d_in");
    const std::size_t dout = positive(field(jn[i], "d_out", w), w + ".d_out");
    const json& k = field(jn[i], "kind", w);
    if (!k.is_string() || (k != "quantum" && k != "classical"))
      fail(w + ".kind", "expected 'quantum' or 'classical'");
    if (kind.empty()) kind = k.get<std::string>();
    if (k != kind) fail(w + ".kind", "mixed quantum and classical nodes");
    qnodes.push_back({name.get<std::string>(), din, dout});
    cnodes.push_back({name.get<std::string>(), din, dout});
  }

  ProcessFile file;
  try {
    if (kind == "quantum") {
      const std::size_t side = total_dim(process_systems(qnodes));
      Matrix m = Matrix::Zero(static_cast<Eigen::Index>(side), static_cast<Eigen::Index>(side));
      if (doc.contains("payload")) {
        const json& p = doc["payload"];
        if (!p.is_array() || p.size() != side)
          fail("$.payload", "expected " + std::to_string(side) + " rows");
        for (std::size_t r = 0; r < side; ++r) {
          const json& row = p[r];
          if (!row.is_array() || row.size() != side)
            fail(at("$.payload", r), "expected " + std::to_string(side) + " entries");
          for (std::size_t c = 0; c < side; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                complex_pair(row[c], at(at("$.payload", r), c));
        }
      } else if (doc.contains("payload_sparse")) {
        const json& p = doc["payload_sparse"];
        if (positive(field(p, "side", "$.payload_sparse"), "$.payload_sparse.side") != side)
          fail("$.payload_sparse.side", "expected " + std::to_string(side));
        const json& e = field(p, "entries", "$.payload_sparse");
        if (!e.is_array()) fail("$.payload_sparse.entries", "expected an array");
        for (std::size_t k = 0; k < e.size(); ++k) {
          const std::string w = at("$.payload_sparse.entries", k);
          if (!e[k].is_array() || e[k].size() != 4) fail(w, "expected [row, col, re, im]");
          if (!e[k][0].is_number_unsigned() || !e[k][1].is_number_unsigned())
            fail(w, "expected integer indices");
          const auto r = e[k][0].get<std::size_t>(), c = e[k][1].get<std::size_t>();
          if (r >= side || c >= side) fail(w, "index out of range");
          m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
              cplx(number(e[k][2], w), number(e[k][3], w));
        }
      } else {
        fail("$", "missing 'payload'");
      }
      file.quantum = ProcessOperator(qnodes, std::move(m));
    } else {
      const json& k = field(doc, "kappa", "$");
      const json& shape = field(k, "shape", "$.kappa");
      const json& data = field(k, "data", "$.kappa");
      std::vector<double> v;
      std::vector<std::size_t> want;
      for (const auto& n : cnodes) {
        want.push_back(n.in_card);
        want.push_back(n.out_card);
      }
      if (!shape.is_array() || shape.size() != want.size()) fail("$.kappa.shape", "wrong rank");
      std::size_t total = 1;
      for (std::size_t i = 0; i < want.size(); ++i) {
        if (positive(shape[i], at("$.kappa.shape", i)) != want[i])
          fail(at("$.kappa.shape", i), "does not match the node cardinalities");
        total *= want[i];
      }
      if (!data.is_array() || data.size() != total)
        fail("$.kappa.data", "expected " + std::to_string(total) + " entries");
      for (std::size_t i = 0; i < total; ++i) v.push_back(number(data[i], at("$.kappa.data", i)));
      file.classical = ClassicalProcess(cnodes, std::move(v));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string("$: ") + e.what());
  }

  if (doc.contains("graph")) {
    const json& edges = field(doc["graph"], "edges", "$.graph");
    if (!edges.is_array()) fail("$.graph.edges", "expected an array");
    std::vector<std::string> names = file.node_names();
    std::vector<Edge> es;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const json& e = edges[i];
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
        fail(at("$.graph.edges", i), "expected [from, to]");
      es.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
    try {
      file.graph = DirectedGraph(names, es);
    } catch (const Error& e) {
      fail("$.graph", e.what());
    }
  }
  if (doc.contains("metadata")) {
    const json& md = doc["metadata"];
    if (!md.is_object()) fail("$.metadata", "expected an object");
    for (auto it = md.begin(); it != md.end(); ++it) {
      if (!it.value().is_string()) fail("$.metadata." + it.key(), "expected a string");
      file.metadata[it.key()] = it.value().get<std::string>();
    }
  }
  return file;
}

ProcessFile load_process_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_process_file(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string dump_process_file(const ProcessFile& file) {
  if (file.quantum.has_value() == file.classical.has_value())
    throw PreconditionError("a process file holds exactly one process");
  json doc;
  doc["format_version"] = kFormatVersion;
  json nodes = json::array();
  if (file.quantum) {
    for (const auto& n : file.quantum->nodes())
      nodes.push_back({{"name", n.name}, {"d_in", n.d_in}, {"d_out", n.d_out}, {"kind", "quantum"}});
    const Matrix& m = file.quantum->matrix();
    const auto side = static_cast<std::size_t>(m.rows());
    if (side <= kDenseLimit) {
      json rows = json::array();
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
        rows.push_back(std::move(row));
      }
      doc["payload"] = std::move(rows);
    } else {
      json entries = json::array();
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
          if (m(r, c) != cplx(0.0))
            entries.push_back({r, c, m(r, c).real(), m(r, c).imag()});
      doc["payload_sparse"] = {{"side", side}, {"entries", std::move(entries)}};
    }
  } else {
    for (const auto& n : file.classical->nodes())
      nodes.push_back(
          {{"name", n.name}, {"d_in", n.in_card}, {"d_out", n.out_card}, {"kind", "classical"}});
    doc["kappa"] = {{"shape", file.classical->shape()}, {"data", file.classical->kappa()}};
  }
  doc["nodes"] = std::move(nodes);
  if (file.graph) {
    json edges = json::array();
    for (const auto& [a, b] : file.graph->edges()) edges.push_back({a, b});
    doc["graph"] = {{"edges", std::move(edges)}};
  }
  if (!file.metadata.empty()) doc["metadata"] = file.metadata;
  return doc.dump() + "\n";
}

void save_process_file(const ProcessFile& file, const std::string& path) {
  const std::string text = dump_process_file(file);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError(path + ": cannot write");
  out << text;
  if (!out) throw PreconditionError(path + ": write failed");
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex_digest(const std::string& bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(bytes)));
  return buf;
}

}  // namespace qcausal
