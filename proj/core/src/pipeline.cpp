#include "renarea/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace renarea {

namespace {

Scenario configured_scenario(const RunConfig& cfg) {
  Scenario scn = build_scenario(cfg.scenario_id);
  if (cfg.r_min > 0) scn.grid.r_min = cfg.r_min;
  if (cfg.r0 > 0) scn.grid.r0 = cfg.r0;
  if (cfg.ladder_count > 0) scn.ladder.count = cfg.ladder_count;
  if (cfg.ladder_eps_max_frac > 0) scn.ladder.eps_max_frac = cfg.ladder_eps_max_frac;
  if (cfg.nr_dense > 0) scn.grid.nr_dense = cfg.nr_dense;
  if (cfg.pinned_axis >= 0) scn.pinned_axis = cfg.pinned_axis;
  RENAREA_CHECK(scn.grid.r_min < scn.grid.r0, "r_min must be below r0");
  return scn;
}

// select the least renormalized area branch unless the scenario pins one
SolveResult select_branch(const Scenario& scn, std::string* note) {
  BranchScan scan = scan_cohomogeneity_branches(scn);
  if (scan.branches.size() == 1) {
    if (note) *note = "single branch " + scan.branches[0].collapse_info;
    return scan.branches[0];
  }
  double best_area = 0.0;
  int best = -1;
  std::ostringstream os;
  for (size_t i = 0; i < scan.branches.size(); ++i) {
    RenormContext ctx(scn, scan.branches[i]);
    double area = ctx.renormalized_area().finite_part;
    os << scan.branches[i].collapse_info << ": area " << area << "; ";
    if (best < 0 || area < best_area) {
      best = static_cast<int>(i);
      best_area = area;
    }
  }
  if (note) *note = os.str() + "selected " + scan.branches[best].collapse_info;
  return scan.branches[best];
}

}  // namespace

std::vector<std::string> applicable_verifications(const std::string& scenario_id) {
  Scenario scn = build_scenario(scenario_id);
  if (!scn.has_surface) {
    if (scn.gbar.dim() == 4) return {"anderson_4d"};
    return {};
  }
  if (scn.dim_sigma == 1) return {"am_2d", "sc_pointwise"};
  return {"thm_1_1", "thm_3_2", "claim_4_3", "sc_pointwise", "lemma_4_2_decays"};
}

RunOutput run_pipeline(const RunConfig& cfg) {
  RunOutput out;
  Scenario scn;
  try {
    scn = configured_scenario(cfg);
  } catch (const Error& e) {
    out.status = RunStatus::bad_config;
    out.error = e.what();
    return out;
  }

  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);
  auto path = [&](const std::string& name) { return (fs::path(cfg.output_dir) / name).string(); };

  std::vector<std::string> wanted =
      cfg.verifications.empty() ? applicable_verifications(cfg.scenario_id) : cfg.verifications;

  try {
    if (!scn.has_surface) {
      for (const std::string& id : wanted) {
        if (id == "anderson_4d") {
          VerificationReport rep = verify_volume_identity(scn);
          if (cfg.emit_json) {
            write_report(rep, path("report_" + id + ".json"));
            out.written_files.push_back(path("report_" + id + ".json"));
          }
          if (cfg.emit_csv) {
            EpsilonLadderFit vol = renormalized_volume(scn);
            write_ladder_csv(vol, path("ladder_volume.csv"));
            out.written_files.push_back(path("ladder_volume.csv"));
          }
          out.reports.push_back(rep);
        }
      }
    } else {
      std::string note;
      SolveResult result;
      try {
        result = select_branch(scn, &note);
      } catch (const Error& e) {
        out.status = RunStatus::solver_failure;
        out.error = e.what();
        return out;
      }
      std::ostringstream summary;
      summary << "scenario " << scn.id << ": residual " << result.residual_norm << ", collapse "
              << result.collapse_info << ", chi " << result.chi << " (" << note << ")";
      out.solve_summary = summary.str();
      {
        std::string tmp = path("solve_summary.txt") + ".tmp";
        std::ofstream f(tmp);
        f << out.solve_summary << "\n";
        f.close();
        std::rename(tmp.c_str(), path("solve_summary.txt").c_str());
        out.written_files.push_back(path("solve_summary.txt"));
      }

      RenormContext ctx(scn, result);
      if (cfg.emit_csv) {
        write_ladder_csv(ctx.renormalized_area(), path("ladder_area.csv"));
        out.written_files.push_back(path("ladder_area.csv"));
        write_ladder_csv(ctx.b2_ladder(), path("ladder_b2.csv"));
        out.written_files.push_back(path("ladder_b2.csv"));
      }

      for (const std::string& id : wanted) {
        VerificationReport rep;
        if (id == "thm_1_1") {
          rep = verify_area_identity(ctx);
        } else if (id == "thm_3_2") {
          rep = verify_b2_characterization(ctx);
        } else if (id == "claim_4_3") {
          rep = verify_boundary_finite_part(ctx);
        } else if (id == "am_2d") {
          rep = verify_area_2d(ctx);
        } else if (id == "sc_pointwise") {
          rep = pointwise_identity_suite(scn, result);
        } else if (id == "lemma_4_2_decays") {
          rep = decay_order_suite(scn, result);
        } else if (id == "lemma_4_1") {
          rep = verify_sigma2_identity(geodesic_slice_compact_4d(), radial_coordinate_field(4),
                                       100, cfg.seed);
        } else {
          out.status = RunStatus::bad_config;
          out.error = "unknown verification id: " + id;
          return out;
        }
        if (cfg.emit_json) {
          write_report(rep, path("report_" + id + ".json"));
          out.written_files.push_back(path("report_" + id + ".json"));
        }
        out.reports.push_back(rep);
      }
    }
  } catch (const Error& e) {
    out.status = RunStatus::solver_failure;
    out.error = e.what();
    return out;
  }

  for (const auto& rep : out.reports)
    if (!rep.pass) out.status = RunStatus::verification_failure;
  return out;
}

std::string catalog_table() {
  std::ostringstream os;
  os << "id                     ambient                      boundary                  eta check\n";
  for (const auto& e : catalog_entries()) {
    CatalogValidation v = validate_catalog_entry(e.id);
    char line[256];
    std::snprintf(line, sizeof(line), "%-22s %-28s %-25s %s (dev %.2e)\n", e.id.c_str(),
                  e.ambient.c_str(), e.boundary.c_str(), v.ok ? "ok" : "FAIL", v.eta_deviation);
    os << line;
  }
  return os.str();
}

RunConfig config_from_file(const std::string& path) {
  std::ifstream in(path);
  RENAREA_CHECK(in.good(), "cannot open config file " + path);
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    std::string stripped;
    for (char c : line)
      if (!is_space(c)) stripped += c;
    if (stripped.empty()) continue;
    auto eq = stripped.find('=');
    RENAREA_CHECK(eq != std::string::npos,
                  "config parse error at line " + std::to_string(lineno) + ": expected key=value");
    std::string key = stripped.substr(0, eq), val = stripped.substr(eq + 1);
    try {
      if (key == "scenario") cfg.scenario_id = val;
      else if (key == "output") cfg.output_dir = val;
      else if (key == "seed") cfg.seed = std::stoull(val);
      else if (key == "r_min") cfg.r_min = std::stod(val);
      else if (key == "r0") cfg.r0 = std::stod(val);
      else if (key == "ladder.count") cfg.ladder_count = std::stoi(val);
      else if (key == "ladder.eps_max_frac") cfg.ladder_eps_max_frac = std::stod(val);
      else if (key == "grid.nr_dense") cfg.nr_dense = std::stoi(val);
      else if (key == "branch.pinned_axis") cfg.pinned_axis = std::stoi(val);
      else if (key == "verifications") {
        std::stringstream ss(val);
        std::string item;
        while (std::getline(ss, item, ','))
          if (!item.empty()) cfg.verifications.push_back(item);
      } else {
        throw Error("config parse error at line " + std::to_string(lineno) + ": unknown key " + key);
      }
    } catch (const std::invalid_argument&) {
      throw Error("config parse error at line " + std::to_string(lineno) + ": bad value for " + key);
    }
  }
  RENAREA_CHECK(!cfg.scenario_id.empty(), "config must set scenario");
  return cfg;
}

}  // namespace renarea
