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

#include "qcausal/qcausal.h"

#include <chrono>
#include <cstring>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "qcausal/classical.hpp"
#include "qcausal/comb.hpp"
#include "qcausal/error.hpp"
#include "qcausal/exemplars.hpp"
#include "qcausal/io.hpp"
#include "qcausal/markov.hpp"

using nlohmann::json;
using namespace qcausal;

struct qc_process {
  ProcessFile file;
  std::string digest;
  std::vector<std::string> names;
};

struct qc_report {
  std::string command;
  int verdict = 0;
  std::string json;
  std::string summary;
  std::string dot;
  bool has_dot = false;
  double runtime_ms = 0.0;
};

namespace {

thread_local std::string g_last_error;

qc_status record(qc_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Runs `body`, mapping library exceptions to status codes.
qc_status guarded(const std::function<void()>& body) {
  g_last_error.clear();
  try {
    body();
    return QC_OK;
  } catch (const ParseError& e) {
    return record(QC_ERR_PARSE, e.what());
  } catch (const LabelError& e) {
    return record(QC_ERR_LABEL, e.what());
  } catch (const DimensionError& e) {
    return record(QC_ERR_DIMENSION, e.what());
  } catch (const BudgetError& e) {
    return record(QC_ERR_BUDGET, e.what());
  } catch (const PreconditionError& e) {
    return record(QC_ERR_PRECONDITION, e.what());
  } catch (const std::bad_alloc&) {
    return record(QC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(QC_ERR_INTERNAL, e.what());
  }
}

qc_process* wrap(ProcessFile file) {
  auto* p = new qc_process{std::move(file), "", {}};
  p->digest = hex_digest(dump_process_file(p->file));
  p->names = p->file.node_names();
  return p;
}

struct Opts {
  double tol = kDefaultTol;
  std::size_t max_iter = kDefaultMaxIter;
  std::size_t budget = 0;  // 0: module default
};

Opts read_opts(const qc_options* o) {
  Opts r;
  if (!o) return r;
  if (!(o->tol > 0.0)) throw PreconditionError("tolerance must be positive");
  r.tol = o->tol;
  r.max_iter = o->max_iter;
  r.budget = o->budget;
  return r;
}

ProcessOperator as_quantum(const qc_process* p) {
  if (p->file.quantum) return *p->file.quantum;
  return quantize(*p->file.classical);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

// Common header; `fill` adds the verdict fields and returns the verdict.
qc_status run(const char* command, const qc_process* p, const qc_options* o, qc_report** out,
              const std::function<int(const Opts&, json&, qc_report&)>& fill) {
  if (!out) return record(QC_ERR_ARGUMENT, "null output pointer");
  *out = nullptr;
  if (!p) return record(QC_ERR_ARGUMENT, "null process");
  return guarded([&] {
    const Opts opts = read_opts(o);
    const auto t0 = std::chrono::steady_clock::now();
    auto r = std::make_unique<qc_report>();
    r->command = command;
    json body;
    body["command"] = command;
    body["input_digest"] = p->digest;
    body["tolerances"] = {{"tol", opts.tol}};
    r->verdict = fill(opts, body, *r);
    body["verdict"] = r->verdict > 0 ? "holds" : r->verdict == 0 ? "fails" : "inconclusive";
    r->json = body.dump(2);
    r->runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    *out = r.release();
  });
}

json graph_json(const DirectedGraph& g) {
  json edges = json::array();
  for (const auto& [a, b] : g.edges()) edges.push_back({a, b});
  return edges;
}

}  // namespace

extern "C" {

const char* qc_version(void) { return "0.1.0"; }

const char* qc_status_name(qc_status s) {
  switch (s) {
    case QC_OK: return "ok";
    case QC_ERR_PARSE: return "parse error";
    case QC_ERR_LABEL: return "label error";
    case QC_ERR_DIMENSION: return "dimension error";
    case QC_ERR_BUDGET: return "budget exceeded";
    case QC_ERR_PRECONDITION: return "precondition failed";
    case QC_ERR_ARGUMENT: return "bad argument";
    case QC_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* qc_last_error(void) { return g_last_error.c_str(); }

void qc_options_init(qc_options* o) {
  if (!o) return;
  o->tol = kDefaultTol;
  o->max_iter = kDefaultMaxIter;
  o->budget = 0;
}

qc_status qc_process_load(const char* path, qc_process** out) {
  if (!path || !out) return record(QC_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = wrap(load_process_file(path)); });
}

qc_status qc_process_parse(const char* text, size_t length, qc_process** out) {
  if (!text || !out) return record(QC_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = wrap(parse_process_file(std::string(text, length))); });
}

qc_status qc_process_save(const qc_process* p, const char* path) {
  if (!p || !path) return record(QC_ERR_ARGUMENT, "null argument");
  return guarded([&] { save_process_file(p->file, path); });
}

qc_status qc_process_dump(const qc_process* p, char** out) {
  if (!p || !out) return record(QC_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    const std::string s = dump_process_file(p->file);
    char* buf = new char[s.size() + 1];
    std::memcpy(buf, s.c_str(), s.size() + 1);
    *out = buf;
  });
}

void qc_process_free(qc_process* p) { delete p; }
void qc_string_free(char* s) { delete[] s; }

int qc_process_is_classical(const qc_process* p) { return p && p->file.is_classical(); }
size_t qc_process_node_count(const qc_process* p) { return p ? p->names.size() : 0; }
const char* qc_process_node_name(const qc_process* p, size_t i) {
  return p && i < p->names.size() ? p->names[i].c_str() : nullptr;
}
const char* qc_process_digest(const qc_process* p) { return p ? p->digest.c_str() : nullptr; }

size_t qc_exemplar_count(void) { return exemplar_names().size(); }

const char* qc_exemplar_name(size_t i) {
  static const std::vector<std::string> names = exemplar_names();
  return i < names.size() ? names[i].c_str() : nullptr;
}

qc_status qc_exemplar(const char* name, qc_process** out) {
  if (!name || !out) return record(QC_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    Exemplar e = make_exemplar(name);
    ProcessFile f;
    f.quantum = std::move(e.quantum);
    f.classical = std::move(e.classical);
    f.graph = std::move(e.graph);
    f.metadata["exemplar"] = e.name;
    f.metadata["description"] = e.description;
    *out = wrap(std::move(f));
  });
}

qc_status qc_validate(const qc_process* p, const qc_options* o, qc_report** out) {
  return run("validate", p, o, out, [&](const Opts& opts, json& b, qc_report& r) {
    if (p->file.classical) {
      const std::size_t budget = opts.budget ? opts.budget : kDefaultClassicalBudget;
      const ClassicalValidity v = validate_classical(*p->file.classical, opts.tol, budget);
      b["kind"] = "classical";
      b["entries_ok"] = v.entries_ok;
      b["worst_deviation"] = v.worst_deviation;
      b["local_tuples"] = v.tuples;
      r.summary = v.valid ? "valid classical process"
                          : "invalid classical process (normalization off by " +
                                fmt(v.worst_deviation) + ")";
      return v.valid ? 1 : 0;
    }
    const ValidityVerdict v = validate_process(*p->file.quantum, opts.tol);
    b["kind"] = "quantum";
    b["hermitian"] = v.hermitian;
    b["psd"] = v.psd;
    b["trace"] = v.trace;
    b["type_terms"] = v.type_terms;
    b["hermiticity_residual"] = v.hermiticity_residual;
    b["min_eigenvalue"] = v.min_eigenvalue;
    b["trace_value"] = v.trace_value;
    b["trace_expected"] = v.trace_expected;
    b["offending_types"] = v.offending_types;
    b["offending_norms"] = v.offending_norms;
    std::string failed;
    auto add = [&](bool ok, const char* what) {
      if (!ok) failed += (failed.empty() ? "" : ", ") + std::string(what);
    };
    add(v.hermitian, "hermiticity");
    add(v.psd, "positivity");
    add(v.trace, "trace");
    add(v.type_terms, "type terms");
    r.summary = v.valid() ? "valid process" : "invalid process: " + failed;
    if (!v.offending_types.empty()) r.summary += " [" + v.offending_types.front() + "]";
    return v.valid() ? 1 : 0;
  });
}

qc_status qc_discover(const qc_process* p, const qc_options* o, qc_report** out) {
  return run("discover", p, o, out, [&](const Opts& opts, json& b, qc_report& r) {
    const ProcessOperator sigma = as_quantum(p);
    const DiscoveryResult d = discover(sigma, opts.tol);
    b["graph"] = graph_json(d.graph);
    json res = json::array();
    for (const auto& [e, v] : d.edge_residuals) res.push_back({e.first, e.second, v});
    b["edge_residuals"] = res;
    b["markov"] = {{"accepted", d.markov.accepted},
                   {"product_residual", d.markov.product_residual},
                   {"reason", d.markov.reason}};
    if (d.markov.accepted) {
      json factors = json::array();
      for (const auto& f : d.markov.factors)
        factors.push_back({{"child", f.child},
                           {"parents", f.parents},
                           {"trace", trace(f.op.base()).real()}});
      b["factors"] = factors;
      const FaithfulnessReport fr = faithfulness_check(d.graph, d.markov, opts.tol);
      b["faithful"] = fr.faithful;
    }
    if (p->file.graph) b["matches_file_graph"] = *p->file.graph == d.graph;
    r.dot = d.graph.to_dot("G");
    r.has_dot = true;
    r.summary = std::to_string(d.graph.edges().size()) + " edges, Markov " +
                (d.markov.accepted ? "accepted" : "rejected");
    return d.markov.accepted ? 1 : 0;
  });
}

qc_status qc_comb_check(const qc_process* p, const char* const* order, size_t n,
                        const qc_options* o, qc_report** out) {
  if (!order && n) return record(QC_ERR_ARGUMENT, "null order");
  return run("comb", p, o, out, [&](const Opts& opts, json& b, qc_report& r) {
    TotalOrder ord;
    for (size_t i = 0; i < n; ++i) {
      if (!order[i]) throw PreconditionError("null node name in order");
      ord.emplace_back(order[i]);
    }
    const CombVerdict v = comb_check(as_quantum(p), ord, opts.tol);
    b["order"] = v.order;
    b["residuals"] = v.residuals;
    b["accepted"] = v.accepted;
    std::string joined;
    for (const auto& s : ord) joined += (joined.empty() ? "" : " < ") + s;
    r.summary = std::string(v.accepted ? "comb for " : "not a comb for ") + joined;
    return v.accepted ? 1 : 0;
  });
}

qc_status qc_comb_search(const qc_process* p, const qc_options* o, qc_report** out) {
  return run("comb", p, o, out, [&](const Opts& opts, json& b, qc_report& r) {
    const std::size_t budget = opts.budget ? opts.budget : kDefaultCombBudget;
    b["tolerances"]["budget"] = budget;
    const CombSearchResult s = comb_search(as_quantum(p), opts.tol, budget);
    b["orders"] = s.orders;
    b["scanned"] = s.scanned;
    const std::string scanned = " (" + std::to_string(s.scanned) + " scanned)";
    r.summary = s.orders.empty() ? "no compatible order" + scanned
                                 : std::to_string(s.orders.size()) + " compatible order" +
                                       (s.orders.size() == 1 ? "" : "s") + scanned;
    return s.orders.empty() ? 0 : 1;
  });
}

qc_status qc_separability(const qc_process* p, const qc_options* o, qc_report** out) {
  return run("separability", p, o, out, [&](const Opts& opts, json& b, qc_report& r) {
    b["tolerances"]["max_iter"] = opts.max_iter;
    const SeparabilityVerdict v = bipartite_separability(as_quantum(p), opts.tol, opts.max_iter);
    const bool ok = v.status == SeparabilityStatus::Separable;
    b["status"] = ok ? "separable" : "inconclusive";
    b["first"] = v.first;
    b["p"] = v.p;
    b["residual"] = v.residual;
    b["iterations"] = v.iterations;
    b["method"] = v.method;
    r.summary = ok ? "separable, p = " + fmt(v.p) + ", residual " + fmt(v.residual)
                   : "inconclusive after " + std::to_string(v.iterations) + " iterations, residual " +
                         fmt(v.residual);
    return ok ? 1 : -1;
  });
}

qc_status qc_markov(const qc_process* p, const qc_options* o, qc_report** out) {
  return run("markov", p, o, out, [&](const Opts& opts, json& b, qc_report& r) {
    if (!p->file.graph) throw PreconditionError("the file has no graph block");
    const DirectedGraph& g = *p->file.graph;
    b["graph"] = graph_json(g);
    bool ok = false;
    if (p->file.classical) {
      const ClassicalMarkov m = classical_markov_check(*p->file.classical, g, opts.tol);
      b["accepted"] = m.accepted;
      b["stochastic_residual"] = m.stochastic_residual;
      b["product_residual"] = m.product_residual;
      b["reason"] = m.reason;
      ok = m.accepted;
      r.summary = ok ? "Markov" : "not Markov: " + m.reason;
    } else {
      const MarkovFactorization m = markov_check(*p->file.quantum, g, opts.tol);
      b["accepted"] = m.accepted;
      b["product_residual"] = m.product_residual;
      b["reason"] = m.reason;
      ok = m.accepted;
      if (ok) {
        const FaithfulnessReport fr = faithfulness_check(g, m, opts.tol);
        b["faithful"] = fr.faithful;
        r.summary = std::string("Markov, ") + (fr.faithful ? "faithful" : "not faithful");
      } else {
        r.summary = "not Markov: " + m.reason;
      }
    }
    return ok ? 1 : 0;
  });
}

qc_status qc_classical_polytope(const qc_process* p, const qc_options* o, qc_report** out) {
  return run("classical polytope", p, o, out, [&](const Opts& opts, json& b, qc_report& r) {
    if (!p->file.classical) throw PreconditionError("polytope membership needs a classical process");
    const ClassicalProcess& kp = *p->file.classical;
    const std::size_t budget = opts.budget ? opts.budget : kDefaultEnumerationBudget;
    b["tolerances"]["budget"] = budget;
    const auto vertices = enumerate_deterministic_processes(kp.nodes(), budget);
    const PolytopeMembership pm = polytope_membership(kp, vertices, opts.tol);
    b["vertices"] = vertices.size();
    b["inside"] = pm.inside;
    b["residual"] = pm.residual;
    json w = json::array();
    for (std::size_t i = 0; i < pm.weights.size(); ++i)
      if (pm.weights[i] > opts.tol) w.push_back({{"vertex", i}, {"weight", pm.weights[i]}});
    b["weights"] = w;
    r.summary = (pm.inside ? "inside" : "outside") + std::string(" the deterministic polytope (") +
                std::to_string(vertices.size()) + " vertices)";
    return pm.inside ? 1 : 0;
  });
}

qc_status qc_classical_extend(const qc_process* p, const qc_options* o, qc_report** out) {
  return run("classical extend", p, o, out, [&](const Opts& opts, json& b, qc_report& r) {
    if (!p->file.classical) throw PreconditionError("extension needs a classical process");
    const ClassicalProcess& kp = *p->file.classical;
    const std::size_t budget = opts.budget ? opts.budget : kDefaultEnumerationBudget;
    const auto vertices = enumerate_deterministic_processes(kp.nodes(), budget);
    const PolytopeMembership pm = polytope_membership(kp, vertices, opts.tol);
    b["inside"] = pm.inside;
    if (!pm.inside) {
      r.summary = "no reversible extension: outside the deterministic polytope";
      return 0;
    }
    std::vector<double> w;
    std::vector<DeterministicProcess> fs;
    double total = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i)
      if (pm.weights[i] > opts.tol) {
        w.push_back(pm.weights[i]);
        fs.push_back(vertices[i]);
        total += pm.weights[i];
      }
    for (double& x : w) x /= total;
    const ReversibleExtension ext = reversible_extension(w, fs);
    const bool rev = is_reversible(ext);
    const ClassicalProcess m = extension_marginal(ext);
    double dev = 0.0;
    for (std::size_t i = 0; i < kp.kappa().size(); ++i)
      dev = std::max(dev, std::abs(m.kappa()[i] - kp.kappa()[i]));
    b["components"] = fs.size();
    b["reversible"] = rev;
    b["marginal_deviation"] = dev;
    b["lambda_cardinality"] = ext.lambdas.front().distribution.size();
    const bool ok = rev && dev <= opts.tol;
    r.summary = ok ? "reversible extension with " + std::to_string(fs.size()) + " components"
                   : "extension failed to reproduce the process";
    return ok ? 1 : 0;
  });
}

qc_status qc_quantize(const qc_process* p, qc_process** out) {
  if (!p || !out) return record(QC_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    if (!p->file.classical) throw PreconditionError("quantize needs a classical process");
    ProcessFile f;
    f.quantum = quantize(*p->file.classical);
    f.graph = p->file.graph;
    f.metadata = p->file.metadata;
    *out = wrap(std::move(f));
  });
}

int qc_report_verdict(const qc_report* r) { return r ? r->verdict : 0; }
const char* qc_report_command(const qc_report* r) { return r ? r->command.c_str() : nullptr; }
const char* qc_report_json(const qc_report* r) { return r ? r->json.c_str() : nullptr; }
const char* qc_report_summary(const qc_report* r) { return r ? r->summary.c_str() : nullptr; }
const char* qc_report_dot(const qc_report* r) {
  return r && r->has_dot ? r->dot.c_str() : nullptr;
}
double qc_report_runtime_ms(const qc_report* r) { return r ? r->runtime_ms : 0.0; }
void qc_report_free(qc_report* r) { delete r; }

}  // extern "C"
