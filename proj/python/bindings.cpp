//
// Copyright 2026 The sqlcritic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//


// Python bindings. Structured values cross the boundary as JSON text so the
// Python side sees exactly the service wire format.

#include <memory>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sqlcritic/critique_parser.hpp"
#include "sqlcritic/error.hpp"
#include "sqlcritic/grpo_math.hpp"
#include "sqlcritic/metrics.hpp"
#include "sqlcritic/reward_service.hpp"
#include "sqlcritic/scoring_server.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

using namespace sqlcritic;

std::string critique_json(const std::string& text) {
  const CritiqueResponse r = parse_critique(text);
  json steps = json::array();
  for (const auto& s : r.steps) {
    steps.push_back({{"index", s.index}, {"question", s.question}, {"answer", s.answer},
                     {"flags_error", s.flags_error}});
  }
  json violations = json::array();
  for (auto v : r.format.violations) violations.push_back(to_string(v));
  return json{{"steps", steps},
              {"verdict", r.verdict ? json(*r.verdict) : json(nullptr)},
              {"corrected_sql", r.corrected_sql ? json(*r.corrected_sql) : json(nullptr)},
              {"format_valid", r.format.valid},
              {"violations", violations},
              {"r_format", check_format(r)}}
      .dump();
}

ServiceConfig config_from(const std::string& config_json) {
  return ServiceConfig::from_json(json::parse(config_json.empty() ? "{}" : config_json));
}

// Scores one request body in-process, same result as POST /v1/score.
std::string score_json(const std::string& body, const std::string& config_json) {
  Scorer scorer(config_from(config_json));
  const HttpReply reply = handle_score(scorer, body);
  if (reply.status != 200) throw py::value_error(reply.body);
  return reply.body;
}

std::string advantages_json(const std::string& body, const std::string& config_json) {
  try {
    return advantages_endpoint(json::parse(body), config_from(config_json).grpo).dump();
  } catch (const RequestError& e) {
    throw py::value_error(e.what());
  } catch (const json::exception& e) {
    throw py::value_error(e.what());
  }
}

// Owns a scorer plus HTTP server on a background thread.
class ServerHandle {
 public:
  explicit ServerHandle(const std::string& config_json)
      : scorer_(std::make_unique<Scorer>(config_from(config_json))),
        server_(std::make_unique<ScoringServer>(*scorer_)) {}
  ~ServerHandle() { stop(); }

  int start(const std::string& host, int port) {
    const int bound = server_->bind(host, port);
    server_->start();
    running_ = true;
    return bound;
  }
  void stop() {
    if (running_) {
      py::gil_scoped_release release;
      server_->stop();
      running_ = false;
    }
  }

 private:
  std::unique_ptr<Scorer> scorer_;
  std::unique_ptr<ScoringServer> server_;
  bool running_ = false;
};

}  // namespace

PYBIND11_MODULE(_sqlcritic, m) {
  m.doc() = "Native reward scoring core";
  m.attr("__version__") = SQLCRITIC_VERSION;

  static py::exception<Error> error_type(m, "SqlcriticError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error_type, (std::string(to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  m.def("parse_critique_json", &critique_json, py::arg("text"));
  m.def("score_json", &score_json, py::arg("body"), py::arg("config") = "{}",
        py::call_guard<py::gil_scoped_release>());
  m.def("advantages_json", &advantages_json, py::arg("body"), py::arg("config") = "{}");
  m.def("default_config_json", [] { return ServiceConfig{}.to_json().dump(); });
  m.def(
      "group_advantages",
      [](const std::vector<double>& rewards, bool normalize_std, double std_floor) {
        GrpoConfig cfg;
        cfg.normalize_std = normalize_std;
        cfg.std_floor = std_floor;
        return group_advantages(rewards, cfg);
      },
      py::arg("rewards"), py::arg("normalize_std") = true, py::arg("std_floor") = 1e-8);
  m.def("clipped_surrogate", &clipped_surrogate, py::arg("ratio"), py::arg("advantage"),
        py::arg("clip_eps") = 0.2);
  m.def("kl_term", &kl_term, py::arg("logp_new"), py::arg("logp_ref"));
  m.def(
      "auc",
      [](const std::vector<double>& scores, const std::vector<bool>& labels) {
        if (scores.size() != labels.size()) throw py::value_error("scores and labels differ in length");
        std::vector<ScoredPrediction> items(scores.size());
        for (std::size_t i = 0; i < scores.size(); ++i) {
          items[i].score = scores[i];
          items[i].label = labels[i];
        }
        return auc(items);
      },
      py::arg("scores"), py::arg("labels"));
  m.def("format_count_percent", &format_count_percent, py::arg("count"), py::arg("total"));

  py::class_<ServerHandle>(m, "Server")
      .def(py::init<const std::string&>(), py::arg("config") = "{}")
      .def("start", &ServerHandle::start, py::arg("host") = "127.0.0.1", py::arg("port") = 0)
      .def("stop", &ServerHandle::stop);
}
