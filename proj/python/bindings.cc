// gopaf/python/bindings.cc

// Copyright 2026 The gopaf Authors
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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>
#include <vector>

#include "gopaf/corpus_io.h"
#include "gopaf/evaluation.h"
#include "gopaf/features.h"
#include "gopaf/gop.h"
#include "gopaf/lattice.h"
#include "gopaf/peakiness.h"
#include "gopaf/types.h"

namespace py = pybind11;

namespace gopaf {
namespace {

using Matrix = py::array_t<double, py::array::c_style | py::array::forcecast>;

Posteriorgram from_log_matrix(const Matrix& m, double tolerance) {
  if (m.ndim() != 2) throw Error("expected a 2-d array of shape (frames, symbols)");
  const auto frames = static_cast<int>(m.shape(0));
  const auto symbols = static_cast<int>(m.shape(1));
  std::vector<double> data(m.data(), m.data() + m.size());
  return Posteriorgram(frames, symbols, std::move(data), tolerance);
}

Posteriorgram from_prob_matrix(const Matrix& m, double tolerance) {
  if (m.ndim() != 2) throw Error("expected a 2-d array of shape (frames, symbols)");
  std::vector<std::vector<double>> rows(m.shape(0));
  auto r = m.unchecked<2>();
  for (py::ssize_t t = 0; t < m.shape(0); ++t)
    for (py::ssize_t v = 0; v < m.shape(1); ++v) rows[t].push_back(r(t, v));
  return Posteriorgram::from_probabilities(rows, tolerance);
}

Matrix to_matrix(const Posteriorgram& p) {
  Matrix out({p.frames(), p.symbols()});
  std::copy(p.data().begin(), p.data().end(), out.mutable_data());
  return out;
}

CanonicalUtterance make_utterance(std::vector<PhoneId> phones, std::string id,
                                  std::optional<std::vector<int>> labels,
                                  std::optional<std::vector<std::pair<int, int>>> alignment) {
  CanonicalUtterance u;
  u.id = std::move(id);
  u.phones = std::move(phones);
  u.labels = std::move(labels);
  if (alignment) {
    u.alignment.emplace();
    for (auto [first, last] : *alignment) u.alignment->push_back({first, last});
  }
  return u;
}

py::dict auc_dict(const AucResult& a) {
  py::dict d;
  d["auc"] = a.auc;
  d["ci95_halfwidth"] = a.ci95_halfwidth;
  d["n_pos"] = a.n_pos;
  d["n_neg"] = a.n_neg;
  d["orientation"] = std::string(orientation_name(a.orientation));
  return d;
}

}  // namespace
}  // namespace gopaf

PYBIND11_MODULE(_gopaf, m) {
  using namespace gopaf;
  m.doc() = "Alignment-free goodness-of-pronunciation scoring on CTC posteriorgrams.";

  auto base = py::register_exception<Error>(m, "GopafError", PyExc_ValueError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", base.ptr());

  py::enum_<Variant>(m, "Variant")
      .value("S", Variant::kS)
      .value("SD", Variant::kSD)
      .value("SDI", Variant::kSDI);

  py::enum_<GopMethod>(m, "Method")
      .value("AVG_EA", GopMethod::kAvgEa)
      .value("SA", GopMethod::kSa)
      .value("AF_S", GopMethod::kAfS)
      .value("AF_SD", GopMethod::kAfSD)
      .value("AF_SDI", GopMethod::kAfSDI)
      .value("AF_S_NORM", GopMethod::kAfSNorm)
      .value("AF_SD_NORM", GopMethod::kAfSDNorm)
      .value("AF_SDI_NORM", GopMethod::kAfSDINorm);
  m.def("parse_method", [](const std::string& s) { return parse_method(s); });
  m.def("method_name", [](GopMethod g) { return std::string(method_name(g)); });

  py::enum_<OccupancyMode>(m, "OccupancyMode")
      .value("FORWARD", OccupancyMode::kForward)
      .value("FORWARD_BACKWARD", OccupancyMode::kForwardBackward);

  py::class_<PhoneInventory>(m, "Inventory")
      .def(py::init<std::vector<std::string>, PhoneId>(), py::arg("symbols"), py::arg("blank"))
      .def_property_readonly("size", &PhoneInventory::size)
      .def_property_readonly("blank", &PhoneInventory::blank)
      .def_property_readonly("symbols", &PhoneInventory::symbols)
      .def("id", &PhoneInventory::id)
      .def("name", &PhoneInventory::name)
      .def("phones", &PhoneInventory::phones)
      .def("__len__", &PhoneInventory::size);

  py::class_<Posteriorgram>(m, "Posteriorgram")
      .def(py::init(&from_log_matrix), py::arg("log_posteriors"),
           py::arg("tolerance") = Posteriorgram::kDefaultTolerance)
      .def_static("from_probabilities", &from_prob_matrix, py::arg("probabilities"),
                  py::arg("tolerance") = Posteriorgram::kDefaultTolerance)
      .def_property_readonly("frames", &Posteriorgram::frames)
      .def_property_readonly("symbols", &Posteriorgram::symbols)
      .def("log_posteriors", &to_matrix);

  py::class_<CanonicalUtterance>(m, "Utterance")
      .def(py::init(&make_utterance), py::arg("phones"), py::arg("id") = "",
           py::arg("labels") = py::none(), py::arg("alignment") = py::none())
      .def_readwrite("id", &CanonicalUtterance::id)
      .def_readwrite("phones", &CanonicalUtterance::phones)
      .def_readwrite("labels", &CanonicalUtterance::labels);

  m.def("read_posteriorgram", [](const std::filesystem::path& p) { return read_posteriorgram(p); });
  m.def("write_posteriorgram", &write_posteriorgram);
  m.def("read_inventory", &read_inventory);

  m.def("forward_log_total",
        [](const Posteriorgram& post, const std::vector<PhoneId>& phones, const PhoneInventory& inv) {
          return forward(build_canonical_graph(phones, inv), post).log_total;
        },
        py::arg("post"), py::arg("phones"), py::arg("inventory"));

  m.def("score",
        [](const Posteriorgram& post, const CanonicalUtterance& utt, int i, GopMethod method,
           const PhoneInventory& inv, OccupancyMode mode) {
          UtteranceScorer scorer(post, utt, inv, mode);
          return scorer.score(i, method).value;
        },
        py::arg("post"), py::arg("utt"), py::arg("i"), py::arg("method"), py::arg("inventory"),
        py::arg("occupancy_mode") = OccupancyMode::kForward);
  m.def("score_utterance",
        [](const Posteriorgram& post, const CanonicalUtterance& utt, GopMethod method,
           const PhoneInventory& inv, OccupancyMode mode) {
          UtteranceScorer scorer(post, utt, inv, mode);
          std::vector<double> out;
          for (int i = 0; i < static_cast<int>(utt.phones.size()); ++i)
            out.push_back(scorer.score(i, method).value);
          return out;
        },
        py::arg("post"), py::arg("utt"), py::arg("method"), py::arg("inventory"),
        py::arg("occupancy_mode") = OccupancyMode::kForward);
  m.def("occupancy",
        [](const Posteriorgram& post, const CanonicalUtterance& utt, int i, Variant v,
           const PhoneInventory& inv, OccupancyMode mode) { return occupancy(post, utt, i, v, inv, mode); },
        py::arg("post"), py::arg("utt"), py::arg("i"), py::arg("variant"), py::arg("inventory"),
        py::arg("occupancy_mode") = OccupancyMode::kForward);

  m.def("fgop",
        [](const Posteriorgram& post, const CanonicalUtterance& utt, int i, const PhoneInventory& inv,
           bool with_occ) { return fgop(post, utt, i, inv, with_occ).flatten(); },
        py::arg("post"), py::arg("utt"), py::arg("i"), py::arg("inventory"), py::arg("with_occ") = false);
  m.def("fgop_columns", &fgop_columns, py::arg("inventory"), py::arg("with_occ") = false);

  m.def("blank_coverage",
        [](const std::vector<Posteriorgram>& corpus, PhoneId blank) { return blank_coverage(corpus, blank); });
  m.def("conditional_entropy", &conditional_entropy, py::arg("post"), py::arg("utt"), py::arg("inventory"));

  m.def("auc_roc",
        [](const std::vector<double>& scores, const std::vector<bool>& positive, const std::string& o) {
          return auc_dict(auc_roc(scores, positive, parse_orientation(o)));
        },
        py::arg("scores"), py::arg("positive"), py::arg("orientation") = "negated");
  m.def("hanley_mcneil_halfwidth", &hanley_mcneil_halfwidth, py::arg("auc"), py::arg("n_pos"),
        py::arg("n_neg"));
  m.def("pcc", [](const std::vector<double>& x, const std::vector<double>& y) { return pcc(x, y); });
  m.def("poly2_regression", [](const std::vector<double>& x, const std::vector<double>& y) {
    return poly2_regression(x, y).coef;
  });
}
