// Python bindings for the main operations: parsing, structural analysis,
// endotacticity tests, region construction, simulation, certification,
// codimension-2 reports and the global-attractor check.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "crn/certify.hpp"
#include "crn/dynamics.hpp"
#include "crn/geometry.hpp"
#include "crn/parse.hpp"

namespace py = pybind11;
using namespace crn;

namespace {

// Exact rational inputs: Python ints and fractions.Fraction both expose
// numerator / denominator.
Rat to_rat(const py::object& o)
{
  long long n = py::cast<long long>(o.attr("numerator"));
  long long d = py::cast<long long>(o.attr("denominator"));
  return Rat(n, d);
}

RatVec to_ratvec(const py::sequence& seq)
{
  RatVec v;
  for (const auto& o : seq) v.push_back(to_rat(py::reinterpret_borrow<py::object>(o)));
  return v;
}

py::dict analyze_dict(const ReactionNetwork& net)
{
  py::dict d;
  py::list names;
  for (const Species& s : net.species) names.append(s.name);
  d["species"] = names;
  d["num_complexes"] = net.complexes.size();
  d["num_reactions"] = net.reactions.size();
  d["linkage_classes"] = linkage_classes(net).complex_ids.size();
  d["stoichiometric_dim"] = stoichiometric_subspace(net).dim;
  d["deficiency"] = deficiency(net);
  d["weakly_reversible"] = is_weakly_reversible(net);
  d["subnetworks"] = stoichiometric_subnetworks(net).blocks.size();
  return d;
}

py::dict endo_dict(const EndoVerdict& v)
{
  py::dict d;
  d["ok"] = v.ok;
  if (v.witness) {
    py::dict w;
    w["direction"] = py::make_tuple(v.witness->v.x.to_double(),
                                    v.witness->v.y.to_double());
    w["violating_reactions"] = v.witness->violating;
    d["witness"] = w;
  }
  return d;
}

py::dict trajectory_dict(const Trajectory& traj)
{
  py::dict d;
  d["times"] = traj.times;
  d["states"] = traj.states;
  d["steps_accepted"] = traj.steps_accepted;
  d["steps_rejected"] = traj.steps_rejected;
  return d;
}

const char* verdict_name(PersistenceCertificate::Verdict v)
{
  switch (v) {
    case PersistenceCertificate::Verdict::Certified: return "certified";
    case PersistenceCertificate::Verdict::Refuted: return "refuted";
    default: return "inconclusive";
  }
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Reaction-network persistence toolkit (C++ core)";

  py::register_exception<CrnError>(m, "CrnError");

  py::class_<ReactionNetwork>(m, "ReactionNetwork")
      .def_property_readonly("num_species", &ReactionNetwork::n)
      .def_property_readonly("num_reactions",
                             [](const ReactionNetwork& n) { return n.reactions.size(); })
      .def_property_readonly("species_names",
                             [](const ReactionNetwork& n) {
                               std::vector<std::string> out;
                               for (const Species& s : n.species) out.push_back(s.name);
                               return out;
                             })
      .def("__repr__", [](const ReactionNetwork& n) {
        return "<ReactionNetwork " + std::to_string(n.species.size()) +
               " species, " + std::to_string(n.reactions.size()) + " reactions>";
      });

  py::class_<KappaSchedule>(m, "KappaSchedule")
      .def_static("constant", &KappaSchedule::constant, py::arg("value"),
                  py::arg("band") = 0.0)
      .def_static("sinusoid", &KappaSchedule::sinusoid, py::arg("center"),
                  py::arg("amplitude"), py::arg("period"), py::arg("phase") = 0.0,
                  py::arg("band") = 0.0)
      .def_static("piecewise", &KappaSchedule::piecewise, py::arg("table"),
                  py::arg("band") = 0.0)
      .def("value", &KappaSchedule::raw_value, py::arg("t"));

  m.def("parse", [](const std::string& text) { return parse_network(text).network; },
        py::arg("text"), "Parse the reaction-network DSL");
  m.def("parse_rates",
        [](const std::string& text) {
          NetworkDocument doc = parse_network(text);
          return doc.rates_or(1.0);
        },
        py::arg("text"), "Rate annotations of a parsed network (default 1)");
  m.def("format", [](const ReactionNetwork& net) {
    NetworkDocument doc;
    doc.network = net;
    doc.rate_annotations.resize(net.reactions.size());
    return format_network(doc);
  });

  m.def("analyze", &analyze_dict, py::arg("net"),
        "Structural summary: linkage classes, dim S, deficiency, ...");
  m.def("is_endotactic",
        [](const ReactionNetwork& net) { return endo_dict(is_endotactic(net)); });
  m.def("is_lower_endotactic", [](const ReactionNetwork& net) {
    return endo_dict(is_lower_endotactic(net));
  });
  m.def("project",
        [](const ReactionNetwork& net, const std::vector<int>& W) {
          return project_network(net, W);
        },
        py::arg("net"), py::arg("coords"));

  m.def("simulate",
        [](const ReactionNetwork& net, const std::vector<KappaSchedule>& scheds,
           const std::vector<double>& c0, double horizon, double rel_tol) {
          SimConfig cfg;
          cfg.horizon = horizon;
          cfg.rel_tol = rel_tol;
          return trajectory_dict(integrate_mass_action(net, scheds, c0, cfg));
        },
        py::arg("net"), py::arg("schedules"), py::arg("c0"),
        py::arg("horizon") = 10.0, py::arg("rel_tol") = 1e-8);

  m.def("face_distance_delta",
        [](const ReactionNetwork& net, const py::sequence& c0,
           const std::vector<int>& W) {
          return face_distance_delta(compatibility_class(net, to_ratvec(c0)), W);
        },
        py::arg("net"), py::arg("c0"), py::arg("W"));
  m.def("smallness_lambda",
        [](const ReactionNetwork& net, const py::sequence& c0) {
          return smallness_lambda(compatibility_class(net, to_ratvec(c0)));
        },
        py::arg("net"), py::arg("c0"));

  m.def("certify",
        [](const ReactionNetwork& net, const std::vector<KappaSchedule>& scheds,
           const py::sequence& c0, double eta, double horizon) {
          CertifyConfig cfg;
          cfg.sim.horizon = horizon;
          cfg.sim.max_step = 0.25;
          PersistenceCertificate cert =
              certify_persistence_2d(net, scheds, to_ratvec(c0), eta, cfg);
          py::dict d;
          d["verdict"] = verdict_name(cert.verdict);
          d["origin_vertex_path"] = cert.origin_vertex_path;
          d["d"] = cert.params.d;
          d["tail_min"] = cert.tail_min;
          d["json"] = certificate_to_json(cert);
          return d;
        },
        py::arg("net"), py::arg("schedules"), py::arg("c0"), py::arg("eta"),
        py::arg("horizon") = 50.0);

  m.def("codim2_repulsion",
        [](const ReactionNetwork& net, const std::vector<KappaSchedule>& scheds,
           const py::sequence& c0, const std::vector<int>& W,
           const std::vector<double>& K_lo, const std::vector<double>& K_hi,
           double eta, double horizon) {
          CertifyConfig cfg;
          cfg.sim.horizon = horizon;
          Codim2Report rep =
              codim2_repulsion(net, scheds, to_ratvec(c0), W, K_lo, K_hi, eta, cfg);
          py::dict d;
          d["epsilon"] = rep.epsilon;
          d["tau_factor"] = rep.tau_factor;
          d["eta_reduced"] = rep.eta_reduced;
          d["windows_checked"] = rep.windows_checked;
          d["worst_ratio"] = rep.worst_ratio;
          bool ok = true;
          for (const CheckResult& c : rep.checks) ok = ok && c.passed;
          d["ok"] = ok;
          return d;
        },
        py::arg("net"), py::arg("schedules"), py::arg("c0"), py::arg("W"),
        py::arg("K_lo"), py::arg("K_hi"), py::arg("eta"),
        py::arg("horizon") = 2.0);

  m.def("birch_point",
        [](const ReactionNetwork& net, const std::vector<double>& rates,
           const std::vector<double>& c0) {
          return birch_point(net, rates, c0, 1e-12);
        },
        py::arg("net"), py::arg("rates"), py::arg("c0"));

  m.def("check_gac",
        [](const ReactionNetwork& net, const std::vector<double>& rates,
           const std::vector<std::vector<double>>& c0_list, double horizon,
           double tol) {
          GacReport rep = check_gac(net, rates, c0_list, horizon, tol);
          py::dict d;
          d["all_converged"] = rep.all_converged;
          py::list starts;
          for (const GacStart& st : rep.starts) {
            py::dict sd;
            sd["c0"] = st.c0;
            sd["birch"] = st.birch;
            sd["distance"] = st.distance;
            sd["converged"] = st.converged;
            starts.append(sd);
          }
          d["starts"] = starts;
          return d;
        },
        py::arg("net"), py::arg("rates"), py::arg("c0_list"),
        py::arg("horizon") = 200.0, py::arg("tol") = 1e-6);
}
