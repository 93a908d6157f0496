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

// qcausal command-line front end. Talks to the library through the C API only.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qcausal/qcausal.h"

namespace {

constexpr int kHolds = 0;
constexpr int kFails = 1;
constexpr int kUsage = 2;

struct ProcessDeleter {
  void operator()(qc_process* p) const { qc_process_free(p); }
};
struct ReportDeleter {
  void operator()(qc_report* r) const { qc_report_free(r); }
};
using Process = std::unique_ptr<qc_process, ProcessDeleter>;
using Report = std::unique_ptr<qc_report, ReportDeleter>;

int input_error(const std::string& what) {
  std::fprintf(stderr, "qcausal: %s\n", what.c_str());
  return kUsage;
}

int library_error(qc_status s) {
  return input_error(std::string(qc_status_name(s)) + ": " + qc_last_error());
}

bool load(const std::string& path, Process& out) {
  qc_process* p = nullptr;
  const qc_status s = qc_process_load(path.c_str(), &p);
  if (s != QC_OK) {
    library_error(s);
    return false;
  }
  out.reset(p);
  return true;
}

// JSON on stdout, one summary line on stderr.
int emit(qc_status s, qc_report** raw) {
  if (s != QC_OK) return library_error(s);
  Report r(*raw);
  nlohmann::json body = nlohmann::json::parse(qc_report_json(r.get()));
  body["runtime_ms"] = qc_report_runtime_ms(r.get());
  std::cout << body.dump(2) << "\n";
  const int v = qc_report_verdict(r.get());
  std::fprintf(stderr, "%s: %s\n", qc_report_command(r.get()), qc_report_summary(r.get()));
  return v > 0 ? kHolds : kFails;
}

bool write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

std::vector<std::string> split_order(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcausal: process operators, causal structure and separability checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qc_version()));

  qc_options opts;
  qc_options_init(&opts);
  std::string file, dot_path, out_path, order, name;
  bool search = false, list = false;

  auto add_tol = [&](CLI::App* c) {
    c->add_option("--tol", opts.tol, "numerical tolerance")->capture_default_str();
  };
  auto add_budget = [&](CLI::App* c) {
    c->add_option("--budget", opts.budget, "node/enumeration budget (0: module default)")
        ->capture_default_str();
  };

  auto* validate = app.add_subcommand("validate", "check the process-operator conditions");
  validate->add_option("file", file, "process file")->required();
  add_tol(validate);
  add_budget(validate);

  auto* disc = app.add_subcommand("discover", "causal structure, Markov factorization, DOT");
  disc->add_option("file", file, "process file")->required();
  disc->add_option("--dot", dot_path, "write the graph as DOT");
  add_tol(disc);

  auto* markov = app.add_subcommand("markov", "Markov check against the file's graph");
  markov->add_option("file", file, "process file")->required();
  add_tol(markov);

  auto* comb = app.add_subcommand("comb", "comb conditions for one order, or all orders");
  comb->add_option("file", file, "process file")->required();
  auto* order_opt = comb->add_option("--order", order, "comma-separated total order");
  auto* search_opt = comb->add_flag("--search", search, "try every order");
  order_opt->excludes(search_opt);
  add_tol(comb);
  add_budget(comb);

  auto* sep = app.add_subcommand("separability", "bipartite causal separability");
  sep->add_option("file", file, "process file")->required();
  sep->add_option("--max-iter", opts.max_iter, "projection iterations")->capture_default_str();
  add_tol(sep);

  auto* classical = app.add_subcommand("classical", "classical processes");
  classical->require_subcommand(1);
  auto* c_validate = classical->add_subcommand("validate", "normalization under local maps");
  auto* c_polytope = classical->add_subcommand("polytope", "deterministic polytope membership");
  auto* c_extend = classical->add_subcommand("extend", "reversible extension");
  auto* c_quantize = classical->add_subcommand("quantize", "diagonal process operator");
  for (auto* c : {c_validate, c_polytope, c_extend, c_quantize}) {
    c->add_option("file", file, "classical process file")->required();
    if (c != c_quantize) {
      add_tol(c);
      add_budget(c);
    }
  }
  c_quantize->add_option("--out", out_path, "output file")->required();

  auto* ex = app.add_subcommand("exemplar", "write a built-in process to a file");
  ex->add_option("name", name, "exemplar name");
  ex->add_option("--out", out_path, "output file (stdout if omitted)");
  ex->add_flag("--list", list, "list exemplar names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  if (*ex) {
    if (list) {
      for (size_t i = 0; i < qc_exemplar_count(); ++i) std::printf("%s\n", qc_exemplar_name(i));
      return kHolds;
    }
    if (name.empty()) return input_error("exemplar needs a name (see --list)");
    qc_process* raw = nullptr;
    const qc_status s = qc_exemplar(name.c_str(), &raw);
    if (s != QC_OK) return library_error(s);
    Process p(raw);
    if (out_path.empty()) {
      char* text = nullptr;
      const qc_status d = qc_process_dump(p.get(), &text);
      if (d != QC_OK) return library_error(d);
      std::fputs(text, stdout);
      qc_string_free(text);
    } else {
      const qc_status w = qc_process_save(p.get(), out_path.c_str());
      if (w != QC_OK) return library_error(w);
      std::fprintf(stderr, "exemplar: wrote %s to %s\n", name.c_str(), out_path.c_str());
    }
    return kHolds;
  }

  Process p;
  if (!load(file, p)) return kUsage;
  qc_report* r = nullptr;

  if (*validate || *c_validate) {
    if (*c_validate && !qc_process_is_classical(p.get()))
      return input_error(file + ": not a classical process");
    return emit(qc_validate(p.get(), &opts, &r), &r);
  }
  if (*disc) {
    const qc_status s = qc_discover(p.get(), &opts, &r);
    if (s == QC_OK && !dot_path.empty() && !write_text(dot_path, qc_report_dot(r))) {
      qc_report_free(r);
      return input_error(dot_path + ": cannot write");
    }
    return emit(s, &r);
  }
  if (*markov) return emit(qc_markov(p.get(), &opts, &r), &r);
  if (*comb) {
    if (search) return emit(qc_comb_search(p.get(), &opts, &r), &r);
    if (order.empty()) return input_error("comb needs --order or --search");
    const std::vector<std::string> names = split_order(order);
    std::vector<const char*> ptrs;
    for (const auto& n : names) ptrs.push_back(n.c_str());
    return emit(qc_comb_check(p.get(), ptrs.data(), ptrs.size(), &opts, &r), &r);
  }
  if (*sep) return emit(qc_separability(p.get(), &opts, &r), &r);
  if (*c_polytope) return emit(qc_classical_polytope(p.get(), &opts, &r), &r);
  if (*c_extend) return emit(qc_classical_extend(p.get(), &opts, &r), &r);
  if (*c_quantize) {
    qc_process* q = nullptr;
    const qc_status s = qc_quantize(p.get(), &q);
    if (s != QC_OK) return library_error(s);
    Process qp(q);
    const qc_status w = qc_process_save(qp.get(), out_path.c_str());
    if (w != QC_OK) return library_error(w);
    std::fprintf(stderr, "quantize: wrote %s\n", out_path.c_str());
    return kHolds;
  }
  return input_error("no command");
}
