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

#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "qcausal/error.hpp"
#include "qcausal/exemplars.hpp"
#include "qcausal/io.hpp"

using namespace qcausal;
using namespace qcausal::testing;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_process_file(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("random complex payload survives a round trip bit for bit") {
  std::mt19937 rng(9);
  const std::vector<QuantumNode> nodes{{"A", 2, 3}, {"B", 1, 2}};
  ProcessFile f;
  f.quantum = ProcessOperator(nodes, random_matrix(12, 12, rng) * 1e-3);
  f.graph = DirectedGraph({"A", "B"}, {{"B", "A"}});
  f.metadata["note"] = "x";
  const std::string text = dump_process_file(f);
  const ProcessFile g = parse_process_file(text);
  REQUIRE(g.quantum);
  CHECK((g.quantum->matrix().array() == f.quantum->matrix().array()).all());
  CHECK(*g.graph == *f.graph);
  CHECK(g.metadata.at("note") == "x");
  CHECK(dump_process_file(g) == text);
}

TEST_CASE("large payloads use triplets") {
  const ProcessFile f{make_bw_extension().process(), std::nullopt, std::nullopt, {}};
  const std::string text = dump_process_file(f);
  CHECK(text.find("payload_sparse") != std::string::npos);
  const ProcessFile g = parse_process_file(text);
  CHECK((g.quantum->matrix().array() == f.quantum->matrix().array()).all());
}

TEST_CASE("classical payload") {
  ProcessFile f;
  f.classical = af_function().kappa();
  const ProcessFile g = parse_process_file(dump_process_file(f));
  REQUIRE(g.classical);
  CHECK(g.classical->kappa() == f.classical->kappa());
  CHECK(g.is_classical());
}

TEST_CASE("errors carry a location") {
  CHECK(error_of("{\"format_version\": 1,").find("byte") != std::string::npos);
  CHECK(error_of("[]").find("$") != std::string::npos);
  const std::string head = R"({"format_version": 1, "nodes": [{"name": "A", "d_in": 1, "d_out": 1, "kind": "quantum"}], )";
  CHECK(error_of(head + R"("payload": [[[1, 0], [0, 0]]]})").find("$.payload") != std::string::npos);
  CHECK(error_of(head + R"("payload": [[["1", 0]]]})").find("$.payload[0][0]") != std::string::npos);
  CHECK(error_of(head + R"("payload": [[[1, 0]]], "graph": {"edges": [["A", "Z"]]}})").find("$.graph") !=
        std::string::npos);
  CHECK(error_of(R"({"format_version": 2, "nodes": []})").find("version") != std::string::npos);
  CHECK(error_of(head + R"("payload": [[[1, 0]]]})").empty());
}

TEST_CASE("digest") {
  CHECK(fnv1a("") == 14695981039346656037ULL);
  CHECK(hex_digest("a") == "af63dc4c8601ec8c");
}

}  // TEST_SUITE
