#include "willmore/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "willmore/backlund.hpp"
#include "willmore/errors.hpp"
#include "willmore/euclidean_oracle.hpp"
#include "willmore/export.hpp"
#include "willmore/parallel.hpp"
#include "willmore/sequence.hpp"
#include "willmore/version.hpp"

namespace willmore::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json quat(const Quaternion& q) { return json::array({num(q.w), num(q.x), num(q.y), num(q.z)}); }

json line_json(const HVec2& v) {
  const HVec2 u = v * (1.0 / v.norm());
  return {{"a", quat(u.a)}, {"b", quat(u.b)}};
}

class Command {
 public:
  Command(RunConfig config, std::ostream& out) : c_(std::move(config)), out_(out) {
    tol_.scale = c_.tol_scale;
    report_["surface"] = c_.surface.name;
    report_["resolution"] = c_.surface.resolution;
    report_["results"] = json::object();
    report_["residuals"] = json::object();
    report_["provenance"] = {{"version", kVersion},
                             {"seed", c_.seed},
                             {"command", c_.command},
                             {"tolerances_version", Tolerances::kVersion},
                             {"tol_scale", c_.tol_scale}};
  }

  int execute() {
    if (c_.command == "analyze") return analyze();
    if (c_.command == "transform") return transform();
    if (c_.command == "sequence") return sequence();
    return export_surface();
  }

 private:
  json& results() { return report_["results"]; }
  json& residuals() { return report_["residuals"]; }

  std::string stem() const {
    std::string s = c_.command + "-" + c_.surface.name;
    if (c_.command == "transform") s += "-" + c_.kind;
    return s;
  }

  fs::path path(const std::string& name) const { return fs::path(c_.out_dir) / name; }

  void write_report() {
    const fs::path p = path(stem() + ".json");
    write_file(p, report_.dump(2) + "\n");
    out_ << "report: " << p.string() << "\n";
  }

  void export_chart(const SurfaceChart& s, const std::string& name, const std::vector<std::string>& formats) {
    for (const auto& f : formats) {
      if (f == "json") continue;
      const fs::path p = path(name + "." + f);
      write_file(p, f == "obj" ? obj_text(s) : csv_text(s));
      out_ << f << ": " << p.string() << "\n";
    }
  }

  std::vector<std::string> formats_or(std::vector<std::string> fallback) const {
    return c_.formats.empty() ? fallback : c_.formats;
  }

  void describe(const SurfaceChart& s) {
    json& r = results();
    const StructureReport st = structure_residuals(s);
    const MeanCurvatureReport mc = mean_curvature_report(s);
    const HarmonicityReport hr = harmonicity_residual(s);
    const DegreeReport dg = degree(s);
    const GateResult gate = willmore_gate(s, tol_);
    const EuclideanOracleResult oracle = euclidean_energy_oracle(s);
    r["willmore_energy"] = num(willmore_energy(s));
    r["oracle_energy"] = num(oracle.energy);
    r["chart_restricted"] = !s.chart().closed();
    r["degree"] = {{"value", num(dg.degree)},
                   {"rounded", dg.rounded ? json(*dg.rounded) : json(nullptr)},
                   {"rounding_defect", num(dg.rounding_defect)},
                   {"warning", dg.warning},
                   {"chart_restricted", dg.chart_restricted}};
    r["max_mean_curvature"] = num(mc.max_norm);
    r["a_norm"] = num(st.a_norm);
    r["q_norm"] = num(st.q_norm);
    r["a_vanishes"] = hopf_vanishes(s, TransformDirection::Forward, tol_);
    r["q_vanishes"] = hopf_vanishes(s, TransformDirection::Backward, tol_);
    std::size_t trusted = 0;
    for (std::size_t n = 0; n < s.chart().size(); ++n) trusted += s.trusted()[n] != 0;
    r["nodes"] = s.chart().size();
    r["trusted_nodes"] = trusted;
    r["branch"] = {{"count", s.branch_count()},
                   {"fraction", num(static_cast<double>(s.branch_count()) / static_cast<double>(s.chart().size()))}};
    r["willmore_gate"] = {{"passed", gate.passed},
                          {"residual", num(gate.residual)},
                          {"coarse_residual", num(gate.coarse_residual)},
                          {"ratio", num(gate.ratio)}};
    json& q = residuals();
    q["conformality"] = num(conformality_residual(s));
    q["mean_curvature_y"] = num(mc.y_consistency);
    q["frame_relation"] = num(mc.frame_relation);
    q["rh_nr"] = num(mc.rh_nr);
    q["s_squared"] = num(st.s_squared);
    q["extraction"] = num(st.extraction);
    q["ds_split"] = num(st.dS_split);
    q["q_psi"] = num(st.q_psi);
    q["im_a_in_l"] = num(st.im_a_in_l);
    q["star_a_sa"] = num(st.star_a_sa);
    q["star_a_as"] = num(st.star_a_as);
    q["star_q_sq"] = num(st.star_q_sq);
    q["star_q_qs"] = num(st.star_q_qs);
    q["dstar_a"] = num(hr.dstar_a);
    q["dstar_q"] = num(hr.dstar_q);
    q["dnabla_a"] = num(hr.dnabla_a);
    q["dnabla_q"] = num(hr.dnabla_q);
    q["normal_identity"] = num(normal_identity_check(s));
  }

  int analyze() {
    const SurfaceChart s = make_surface(c_.surface);
    describe(s);
    const json& w = results()["willmore_energy"];
    const json& s2 = residuals()["s_squared"];
    const bool ok = !w.is_null() && !s2.is_null() && s2.get<double>() <= 1e-10;
    results()["numerically_sound"] = ok;
    export_chart(s, c_.surface.name, formats_or({}));
    write_report();
    if (ok) out_ << "W = " << format_double(w.get<double>()) << "\n";
    if (!ok) throw ChartDegenerateError("S^2 = -1 violated or energy not finite");
    return kOk;
  }

  bool gate(const SurfaceChart& s) {
    const GateResult g = willmore_gate(s, tol_);
    results()["willmore_gate"] = {{"passed", g.passed},
                                  {"residual", num(g.residual)},
                                  {"coarse_residual", num(g.coarse_residual)},
                                  {"ratio", num(g.ratio)}};
    return g.passed;
  }

  int transform() {
    const SurfaceChart s = make_surface(c_.surface);
    results()["kind"] = c_.kind;
    if (c_.kind == "dual") return dual(s);
    if (!gate(s)) {
      results()["classification"] = "NotWillmore";
      write_report();
      throw NonWillmoreError("surface fails the Willmore gate");
    }
    if (c_.kind == "one-step") return one_step_cmd(s);
    return backlund_cmd(s, c_.kind == "forward" ? TransformDirection::Forward : TransformDirection::Backward);
  }

  int dual(const SurfaceChart& s) {
    const DualResult d = dual_surface(s, tol_);
    results()["classification"] = "Surface";
    results()["dual_willmore_energy"] = num(willmore_energy(d.dual));
    residuals()["adjoint"] = num(d.adjoint);
    residuals()["kernel_image"] = num(d.kernel_image);
    export_chart(d.dual, c_.surface.name + "-dual", formats_or({"csv"}));
    write_report();
    return kOk;
  }

  int one_step_cmd(const SurfaceChart& s) {
    const AffineFrame frame = choose_frame(s, tol_, c_.seed);
    const OneStepResult r = one_step(s, frame, tol_);
    const SurfaceChart& w = r.source;
    const double a = max_norm(w.hopf().A, &w.trusted());
    const double q = max_norm(w.hopf().Q, &w.trusted());
    const LineField kernel =
        kernel_line_field(w.hopf().A, tol_.hopf_zero(w.chart().relative_spacing(), a + q), tol_.eps_zero, &w.trusted());
    if (!r.gsharp) throw AllZeroError("g# is constant");
    const SharpReport sr = sharp_report(r, sharp_sphere_data(w, kernel, tol_.frame_margin));
    json periods = json::array();
    for (const auto& p : r.periods) periods.push_back(quat(p));
    const HMat2& m = frame.moebius;
    results()["classification"] = "Surface";
    results()["frame_moebius"] = json::array({quat(m.m11), quat(m.m12), quat(m.m21), quat(m.m22)});
    results()["periods"] = periods;
    results()["gsharp_willmore_energy"] = num(willmore_energy(*r.gsharp));
    residuals()["closedness_defect"] = num(r.closedness_defect);
    residuals()["harmonicity"] = num(r.harmonicity);
    residuals()["sharp_n_match"] = num(sr.n_match);
    residuals()["sharp_r_match"] = num(sr.r_match);
    residuals()["sharp_square"] = num(sr.square);
    residuals()["sharp_frame_relation"] = num(sr.frame_relation);
    residuals()["sharp_mean_curvature"] = num(sr.mean_curvature);
    residuals()["sharp_conformality"] = num(sr.conformality);
    export_chart(*r.gsharp, c_.surface.name + "-gsharp", formats_or({"csv"}));
    write_report();
    out_ << "closedness defect = " << format_double(r.closedness_defect) << "\n";
    return kOk;
  }

  int backlund_cmd(const SurfaceChart& s, TransformDirection dir) {
    TransformResult t;
    try {
      t = backlund_transform(s, dir, tol_, c_.seed);
    } catch (const AllZeroError& e) {
      results()["classification"] = "Twistor";
      results()["vanishing_field"] = dir == TransformDirection::Forward ? "A" : "Q";
      write_report();
      out_ << "Twistor: " << e.what() << "\n";
      return kTwistor;
    }
    json& r = results();
    r["spread"] = num(t.spread);
    r["constant_radius"] = num(tol_.constant_map_radius(s.chart().relative_spacing()));
    r["constant"] = t.constant;
    r["reference_line"] = line_json(t.reference);
    r["distance_to_infinity"] = num(chordal_distance(t.reference, AffineFrame::e()));
    r["vanishing_ratio"] = num(t.vanishing_ratio);
    r["chart_attempts"] = t.attempts;
    r["line_holes"] = t.lines.hole_count;
    r["line_continuity"] = num(max_adjacent_distance(t.lines, &s.trusted()));
    const std::string name = c_.surface.name + "-" + c_.kind;
    if (t.constant) {
      r["classification"] = "Minimal";
      if (c_.invert) {
        const SurfaceChart inv = moebius_apply(normalizing_moebius(t.reference), s);
        r["inverted"] = {{"max_mean_curvature", num(mean_curvature_report(inv).max_norm)},
                         {"willmore_energy", num(willmore_energy(inv))}};
        export_chart(inv, c_.surface.name + "-inverted", formats_or({"csv"}));
      }
      write_report();
      out_ << "Minimal: transform is constant (spread " << format_double(t.spread) << ")\n";
      return kMinimal;
    }
    const SurfaceChart& f = *t.surface;
    const SphereRelation rel = sphere_relation_residual(s, t);
    const HarmonicityReport hr = harmonicity_residual(f);
    r["classification"] = "Surface";
    r["transformed"] = {{"willmore_energy", num(willmore_energy(f))}, {"degree", num(degree(f).degree)}};
    residuals()["hopf_swap"] = num(hopf_swap_residual(s, t));
    residuals()["sphere_relation_quotient"] = num(rel.quotient);
    residuals()["sphere_relation_full"] = num(rel.full);
    residuals()["transformed_dstar_a"] = num(hr.dstar_a);
    residuals()["transformed_dstar_q"] = num(hr.dstar_q);
    try {
      const auto opposite = dir == TransformDirection::Forward ? TransformDirection::Backward : TransformDirection::Forward;
      const TransformResult back = backlund_transform(f, opposite, tol_, c_.seed);
      residuals()["involution"] = num(involution_residual(s, t, back));
    } catch (const Error& e) {
      residuals()["involution"] = nullptr;
      r["involution_note"] = e.what();
    }
    export_chart(f, name, formats_or({"csv"}));
    write_report();
    return kOk;
  }

  static json entry_json(const LedgerEntry& e) {
    return {{"index", e.index},
            {"energy", num(e.energy)},
            {"degree", num(e.degree)},
            {"normal_degree", e.normal_degree ? json(*e.normal_degree) : json(nullptr)},
            {"harmonicity", num(e.harmonicity)},
            {"a_norm", num(e.a_norm)},
            {"q_norm", num(e.q_norm)},
            {"a_vanishes", e.a_vanishes},
            {"q_vanishes", e.q_vanishes},
            {"hopf_swap", e.hopf_swap ? num(*e.hopf_swap) : json(nullptr)},
            {"sphere_relation", e.sphere_relation ? num(*e.sphere_relation) : json(nullptr)},
            {"certified", e.certified},
            {"gate_ratio", num(e.gate_ratio)}};
  }

  static json side_json(const SideRecord& s) {
    json ev = json::object();
    for (const auto& [k, v] : s.termination.evidence) ev[k] = num(v);
    return {{"kind", to_string(s.termination.kind)},
            {"steps", s.steps},
            {"note", s.termination.note},
            {"evidence", ev},
            {"constant_point", s.constant_point ? line_json(*s.constant_point) : json(nullptr)}};
  }

  static std::string optional_cell(const std::optional<double>& v) {
    if (!v) return "-";
    std::ostringstream c;
    c << std::setprecision(6) << *v;
    return c.str();
  }

  static std::string table(const SequenceLedger& l) {
    std::ostringstream t;
    t << std::left << std::setw(6) << "index" << std::setw(16) << "energy" << std::setw(14) << "degree"
      << std::setw(13) << "harmonicity" << std::setw(13) << "|A|" << std::setw(13) << "|Q|" << std::setw(13)
      << "hopf_swap" << std::setw(13) << "sphere_rel" << "certified\n";
    t << std::setprecision(6);
    for (const auto& e : l.entries) {
      t << std::setw(6) << e.index << std::setw(16) << e.energy << std::setw(14) << e.degree << std::setw(13)
        << e.harmonicity << std::setw(13) << e.a_norm << std::setw(13) << e.q_norm << std::setw(13)
        << optional_cell(e.hopf_swap) << std::setw(13) << optional_cell(e.sphere_relation)
        << (e.certified ? "yes" : "no") << "\n";
    }
    t << "\ntermination: " << to_string(l.termination.kind) << " (" << to_string(l.termination.side) << ")";
    if (!l.termination.note.empty()) t << ", " << l.termination.note;
    t << "\nforward: " << to_string(l.forward.termination.kind) << " after " << l.forward.steps << " step(s)";
    t << "\nbackward: " << to_string(l.backward.termination.kind) << " after " << l.backward.steps << " step(s)\n";
    for (const auto& [k, v] : l.termination.evidence) t << "  " << k << " = " << v << "\n";
    return t.str();
  }

  int sequence() {
    const SurfaceChart s = make_surface(c_.surface);
    SequenceOptions o;
    o.max_steps = c_.max_steps;
    o.tol = tol_;
    o.seed = c_.seed;
    SequenceLedger l;
    try {
      l = run_sequence(s, o);
    } catch (const NonWillmoreError&) {
      gate(s);
      results()["classification"] = "NotWillmore";
      write_report();
      throw;
    }
    json entries = json::array();
    for (const auto& e : l.entries) entries.push_back(entry_json(e));
    json ev = json::object();
    for (const auto& [k, v] : l.termination.evidence) ev[k] = num(v);
    const LengthBound lb = length_bound_check(l);
    json& r = results();
    r["termination"] = {{"kind", to_string(l.termination.kind)},
                        {"side", to_string(l.termination.side)},
                        {"note", l.termination.note},
                        {"evidence", ev}};
    r["length"] = l.entries.size();
    r["forward"] = side_json(l.forward);
    r["backward"] = side_json(l.backward);
    r["genus"] = l.genus;
    r["deg_k"] = l.deg_k;
    r["chart_restricted"] = l.local;
    r["entries"] = entries;
    r["length_bound"] = {{"evaluated", lb.evaluated}, {"satisfied", lb.satisfied}, {"lhs", num(lb.lhs)}, {"n", lb.n}};
    residuals()["quantization"] = num(quantization_check(l));
    residuals()["gate"] = num(l.gate_residual);
    residuals()["gate_coarse"] = num(l.gate_coarse_residual);
    const fs::path tp = path(stem() + ".txt");
    write_file(tp, table(l));
    out_ << "ledger: " << tp.string() << "\n";
    write_report();
    out_ << "termination: " << to_string(l.termination.kind) << " (" << to_string(l.termination.side) << ")\n";
    switch (l.termination.kind) {
      case TerminationKind::Twistor:
      case TerminationKind::RoundSphere:
        return kTwistor;
      case TerminationKind::Minimal:
        return kMinimal;
      default:
        return kOk;
    }
  }

  int export_surface() {
    const std::vector<std::string> formats = formats_or({"obj", "csv", "json"});
    const SurfaceChart s = make_surface(c_.surface);
    export_chart(s, c_.surface.name, formats);
    if (std::find(formats.begin(), formats.end(), "json") != formats.end()) {
      describe(s);
      write_report();
    }
    return kOk;
  }

  RunConfig c_;
  std::ostream& out_;
  Tolerances tol_;
  json report_;
};

std::string read_text(const std::string& file) {
  std::ifstream f(file, std::ios::binary);
  if (!f) throw IoError("cannot read config file " + file);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Willmore surfaces: analysis, Baecklund transforms and sequences", "willmore"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  std::map<std::string, std::string> flags;
  std::string config_file;
  app.add_option("--config", config_file, "Key-value config file (keys mirror the long flags)");
  struct Flag {
    const char* key;
    const char* help;
  };
  const Flag options[] = {
      {"surface", "Gallery surface name"},
      {"res", "Grid resolution per direction"},
      {"kind", "Transform: one-step, forward, backward or dual"},
      {"max-steps", "Sequence steps per side"},
      {"threads", "Worker threads (1 = serial)"},
      {"out", "Output directory (default $WILLMORE_OUT or willmore-out)"},
      {"format", "Comma list of obj, csv, json"},
      {"tol-scale", "Multiplier for every tolerance"},
      {"seed", "Seed for random Moebius chart trials"},
      {"umax", "Catenoid half-height"},
      {"twistor-convention", "left or right placement of j"},
      {"control-amplitude", "Amplitude of the non-Willmore control"},
  };
  for (const auto& f : options) {
    app.add_option_function<std::string>(std::string("--") + f.key,
                                         [&flags, key = std::string(f.key)](const std::string& v) { flags[key] = v; },
                                         f.help);
  }
  app.add_flag_function("--invert", [&flags](std::int64_t) { flags["invert"] = "true"; },
                        "Invert at the point of a constant transform");

  std::string surface_arg;
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"analyze", "Mean curvature sphere, energy, degree and residual report"},
           {"transform", "One Baecklund, 1-step or dual transform"},
           {"sequence", "Willmore sequence with energy ledger"},
           {"export", "Write OBJ, CSV and JSON files"}}) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("surface", surface_arg, "Gallery surface name");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kValidation;
  }

  RunConfig config;
  config.command = app.get_subcommands().front()->get_name();
  if (config.command == "export") config.formats = {};
  try {
    if (const char* env = std::getenv("WILLMORE_OUT"); env != nullptr && *env != '\0') config.out_dir = env;
    if (!config_file.empty())
      for (const auto& [k, v] : parse_config_text(read_text(config_file))) apply_setting(config, k, v);
    if (!surface_arg.empty()) flags["surface"] = surface_arg;
    for (const auto& [k, v] : flags) apply_setting(config, k, v);
    validate(config);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }

  set_thread_count(config.threads);
  try {
    return Command(config, out).execute();
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const InvalidArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const AllZeroError& e) {
    err << "twistor signal: " << e.what() << "\n";
    return kTwistor;
  } catch (const Error& e) {
    err << "numerical gate failure: " << e.what() << "\n";
    return kGateFailure;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace willmore::cli
