// Command-line entry point: structural analysis, endotacticity verdicts,
// persistence certification and global-attractor checks over .crn files.
//
// Exit codes: 0 success/certified, 2 parse error, 3 precondition failure,
// 4 inconclusive, 5 refuted.

#include "CLI11.hpp"
#include "json.hpp"

#include "crn/certify.hpp"
#include "crn/dynamics.hpp"
#include "crn/geometry.hpp"
#include "crn/parse.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace crn;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void emit(const std::string& dir, const std::string& name,
          const std::string& body)
{
  std::filesystem::create_directories(dir);
  std::ofstream out(dir + "/" + name);
  if (!out) throw std::runtime_error("cannot write " + dir + "/" + name);
  out << body;
}

// Schedule spec grammar: "const:V" | "sin:CENTER,AMP,PERIOD[,PHASE]" |
// "pw:t0:v0,t1:v1,...".
KappaSchedule parse_schedule(const std::string& spec, double band)
{
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto nums = [](const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
    return v;
  };
  if (kind == "const") {
    auto v = nums(rest);
    if (v.size() != 1) throw std::runtime_error("const:V expects one value");
    return KappaSchedule::constant(v[0], band);
  }
  if (kind == "sin") {
    auto v = nums(rest);
    if (v.size() < 3 || v.size() > 4)
      throw std::runtime_error("sin:CENTER,AMP,PERIOD[,PHASE]");
    return KappaSchedule::sinusoid(v[0], v[1], v[2], v.size() == 4 ? v[3] : 0.0,
                                   band);
  }
  if (kind == "pw") {
    std::vector<std::pair<double, double>> table;
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      auto c = tok.find(':');
      if (c == std::string::npos) throw std::runtime_error("pw:t0:v0,t1:v1,...");
      table.push_back({std::stod(tok.substr(0, c)), std::stod(tok.substr(c + 1))});
    }
    return KappaSchedule::piecewise(std::move(table), band);
  }
  throw std::runtime_error("unknown schedule kind '" + kind + "'");
}

std::vector<double> parse_doubles(const std::string& s)
{
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
  return v;
}

RatVec parse_ratvec(const std::string& s)
{
  RatVec v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    auto slash = tok.find('/');
    if (slash == std::string::npos)
      v.push_back(Rat(std::stoll(tok)));
    else
      v.push_back(Rat(std::stoll(tok.substr(0, slash)),
                      std::stoll(tok.substr(slash + 1))));
  }
  return v;
}

json endo_json(const EndoVerdict& v)
{
  json j;
  j["ok"] = v.ok;
  if (v.witness) {
    j["witness"] = {{"direction",
                     {v.witness->v.x.to_double(), v.witness->v.y.to_double()}},
                    {"violating_reactions", v.witness->violating}};
  }
  return j;
}

// Log-scale SVG of one cylinder region with the projected trajectory.
std::string region_svg(const Cylinder& cyl, const Trajectory& traj, double M)
{
  const RegionL& reg = cyl.region;
  double floor_v = reg.d / 10;
  double lo = std::log10(floor_v);
  double hi = std::log10(std::max(M, 1.0) * 1.2);
  const double W = 640, H = 640, pad = 48;
  auto mapx = [&](double x) {
    double t = (std::log10(std::max(x, floor_v)) - lo) / (hi - lo);
    return pad + t * (W - 2 * pad);
  };
  auto mapy = [&](double y) {
    double t = (std::log10(std::max(y, floor_v)) - lo) / (hi - lo);
    return H - pad - t * (H - 2 * pad);
  };
  std::ostringstream os;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='"
     << H << "' viewBox='0 0 " << W << " " << H << "'>\n";
  os << "<rect width='100%' height='100%' fill='white'/>\n";
  // Axes (log scale).
  os << "<line x1='" << pad << "' y1='" << H - pad << "' x2='" << W - pad
     << "' y2='" << H - pad << "' stroke='black'/>\n";
  os << "<line x1='" << pad << "' y1='" << pad << "' x2='" << pad << "' y2='"
     << H - pad << "' stroke='black'/>\n";
  // Region: vertex chain, then the two offset rays out to M.
  os << "<polyline fill='none' stroke='#1f77b4' stroke-width='2' points='";
  os << mapx(reg.d) << "," << mapy(M) << " ";
  for (size_t i = 1; i + 1 < reg.vertices.size(); ++i)
    os << mapx(reg.vertices[i][0]) << "," << mapy(reg.vertices[i][1]) << " ";
  os << mapx(M) << "," << mapy(reg.d) << "'/>\n";
  // Power-curve guides through the chain corners.
  os << "<polyline fill='none' stroke='#aec7e8' stroke-width='1' "
        "stroke-dasharray='4 3' points='";
  for (const auto& p : reg.chain) os << mapx(p[0]) << "," << mapy(p[1]) << " ";
  os << "'/>\n";
  // Trajectory projected to (x_l, x_k).
  os << "<polyline fill='none' stroke='#d62728' stroke-width='1.2' points='";
  for (const auto& st : traj.states)
    os << mapx(st[static_cast<size_t>(cyl.l)]) << ","
       << mapy(st[static_cast<size_t>(cyl.k)]) << " ";
  os << "'/>\n";
  os << "<text x='" << W / 2 << "' y='" << H - 12
     << "' font-size='13' text-anchor='middle'>x_" << cyl.l
     << " (log)</text>\n";
  os << "<text x='14' y='" << H / 2 << "' font-size='13' text-anchor='middle' "
     << "transform='rotate(-90 14 " << H / 2 << ")'>x_" << cyl.k
     << " (log)</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Reaction-network persistence toolkit"};
  app.require_subcommand(1);

  std::string path, out_dir = ".", mode = "lower", project, c0_spec = "",
              rates_spec = "";
  std::vector<std::string> schedule_specs;
  double horizon = 50.0, eta = 0.5, tol = 1e-6;
  int starts = 20;
  unsigned seed = 12345;
  bool verbose = false;

  app.add_flag("-v,--verbose", verbose, "progress to stdout");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--seed", seed, "sampling seed")->capture_default_str();

  auto* analyze = app.add_subcommand("analyze", "structural report");
  analyze->add_option("path", path)->required();

  auto* endo = app.add_subcommand("endotactic", "sweep-test verdict");
  endo->add_option("path", path)->required();
  endo->add_option("--mode", mode, "lower|full")->capture_default_str();
  endo->add_option("--project", project, "comma pair of coordinates");

  auto* certify = app.add_subcommand("certify", "persistence certificate");
  certify->add_option("path", path)->required();
  certify->add_option("--c0", c0_spec, "initial condition (rationals)")->required();
  certify->add_option("--schedule", schedule_specs,
                      "one spec for all reactions, or one per reaction");
  certify->add_option("--horizon", horizon)->capture_default_str();
  certify->add_option("--eta", eta, "rate band (eta, 1/eta)")->capture_default_str();

  auto* gac = app.add_subcommand("gac", "global-attractor check");
  gac->add_option("path", path)->required();
  gac->add_option("--rates", rates_spec, "comma list (default: annotations)");
  gac->add_option("--starts", starts)->capture_default_str();
  gac->add_option("--horizon", horizon)->capture_default_str();
  gac->add_option("--tol", tol)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (const char* env = std::getenv("CRNPERSIST_SEED")) seed = std::stoul(env);

  NetworkDocument doc;
  try {
    doc = parse_network(slurp(path));
  } catch (const std::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  }
  const ReactionNetwork& net = doc.network;

  try {
    if (*analyze) {
      json j;
      j["schema_version"] = 1;
      json names = json::array();
      for (const Species& s : net.species) names.push_back(s.name);
      j["species"] = names;
      j["num_complexes"] = net.complexes.size();
      j["num_reactions"] = net.reactions.size();
      j["linkage_classes"] = linkage_classes(net).complex_ids.size();
      j["stoichiometric_dim"] = stoichiometric_subspace(net).dim;
      j["deficiency"] = deficiency(net);
      j["weakly_reversible"] = is_weakly_reversible(net);
      json blocks = json::array();
      for (const SubnetworkBlock& b : stoichiometric_subnetworks(net).blocks) {
        json bj;
        bj["reactions"] = b.reaction_ids;
        bj["complexes"] = b.complex_ids;
        blocks.push_back(bj);
      }
      j["subnetworks"] = blocks;
      emit(out_dir, "report.json", j.dump(2) + "\n");
      if (verbose) std::cout << "wrote report.json\n";
      return 0;
    }

    if (*endo) {
      ReactionNetwork target = net;
      if (!project.empty()) {
        auto idx = parse_doubles(project);
        std::vector<int> W;
        for (double d : idx) W.push_back(static_cast<int>(d));
        target = project_network(net, W);
      }
      json j;
      j["schema_version"] = 1;
      j["mode"] = mode;
      try {
        EndoVerdict v =
            mode == "full" ? is_endotactic(target) : is_lower_endotactic(target);
        j["verdict"] = endo_json(v);
        json cand = json::array();
        for (const Point2& p : candidate_directions(planar_frame(target)))
          cand.push_back({p.x.to_double(), p.y.to_double()});
        j["candidate_directions"] = cand;
      } catch (const NotPlanar& e) {
        std::cerr << "precondition: " << e.what() << "\n";
        return 3;
      }
      emit(out_dir, "report.json", j.dump(2) + "\n");
      return 0;
    }

    if (*certify) {
      RatVec c0 = parse_ratvec(c0_spec);
      std::vector<KappaSchedule> scheds;
      if (schedule_specs.empty()) {
        for (double r : doc.rates_or(1.0))
          scheds.push_back(KappaSchedule::constant(r, eta));
      } else if (schedule_specs.size() == 1) {
        for (size_t j = 0; j < net.reactions.size(); ++j)
          scheds.push_back(parse_schedule(schedule_specs[0], eta));
      } else if (schedule_specs.size() == net.reactions.size()) {
        for (const std::string& s : schedule_specs)
          scheds.push_back(parse_schedule(s, eta));
      } else {
        std::cerr << "expected 1 or " << net.reactions.size() << " schedules\n";
        return 3;
      }
      CertifyConfig cfg;
      cfg.sim.horizon = horizon;
      cfg.sim.max_step = 0.25;
      cfg.seed = seed;
      PersistenceCertificate cert = certify_persistence_2d(net, scheds, c0, eta, cfg);
      emit(out_dir, "certificate.json", certificate_to_json(cert) + "\n");
      if (!cert.trajectory.states.empty()) {
        std::vector<std::string> names;
        for (const Species& s : net.species) names.push_back(s.name);
        emit(out_dir, "trajectory.csv",
             trajectory_to_csv(cert.trajectory, names));
      }
      for (const Cylinder& cyl : cert.cylinders)
        emit(out_dir,
             "region_" + std::to_string(cyl.k) + "_" + std::to_string(cyl.l) +
                 ".svg",
             region_svg(cyl, cert.trajectory, cert.M));
      if (verbose)
        std::cout << "wrote certificate.json, trajectory.csv and "
                  << cert.cylinders.size() << " region plots\n";
      switch (cert.verdict) {
        case PersistenceCertificate::Verdict::Certified: return 0;
        case PersistenceCertificate::Verdict::Refuted:
          std::cerr << "refuted: " << cert.diagnostics << "\n";
          return 5;
        default:
          std::cerr << "inconclusive: " << cert.diagnostics << "\n";
          return 4;
      }
    }

    if (*gac) {
      std::vector<double> rates =
          rates_spec.empty() ? doc.rates_or(1.0) : parse_doubles(rates_spec);
      // Random positive starts around the all-ones point, scaled back onto
      // reasonable classes.
      std::mt19937 rng(seed);
      std::uniform_real_distribution<double> unif(0.1, 1.9);
      std::vector<std::vector<double>> c0s;
      for (int s = 0; s < starts; ++s) {
        std::vector<double> x(static_cast<size_t>(net.n()));
        for (double& xi : x) xi = unif(rng);
        c0s.push_back(x);
      }
      GacReport rep = check_gac(net, rates, c0s, horizon, tol);
      json j;
      j["schema_version"] = 1;
      j["tol"] = rep.tol;
      j["all_converged"] = rep.all_converged;
      json js = json::array();
      for (const GacStart& st : rep.starts)
        js.push_back({{"c0", st.c0},
                      {"birch", st.birch},
                      {"terminal", st.terminal},
                      {"distance", st.distance},
                      {"converged", st.converged}});
      j["starts"] = js;
      emit(out_dir, "report.json", j.dump(2) + "\n");
      return rep.all_converged ? 0 : 4;
    }
  } catch (const NotWeaklyReversible& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return 3;
  } catch (const DimensionUnsupported& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return 3;
  } catch (const CrnError& e) {
    std::cerr << e.tag << ": " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
