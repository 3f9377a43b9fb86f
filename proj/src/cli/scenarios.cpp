#include "ow/scenarios.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "ow/acceptance.hpp"
#include "ow/adf.hpp"
#include "ow/branching.hpp"
#include "ow/config.hpp"
#include "ow/double_slit.hpp"
#include "ow/errors.hpp"
#include "ow/feynman_kac.hpp"
#include "ow/field_io.hpp"
#include "ow/observables.hpp"
#include "ow/param_flows.hpp"
#include "ow/sde.hpp"

namespace fs = std::filesystem;

namespace ow {

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string file_checksum(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return fnv1a_hex(ss.str());
}

namespace {

Grid parse_grid(SchemaReader& r) {
  const auto dims = r.integer("grid.dims", 1);
  const auto n = r.number_array("grid.n");
  const auto extent = r.number_array2("grid.extent");
  r.require(dims == 1 || dims == 2, "grid.dims must be 1 or 2");
  r.require(n.size() == std::size_t(dims), "grid.n must have one entry per axis");
  r.require(extent.size() == std::size_t(dims) &&
                (extent.empty() || extent.front().size() == 2),
            "grid.extent must hold [lo, hi] per axis");
  if (dims == 1 && n.size() == 1 && extent.size() == 1 && extent[0].size() == 2)
    return Grid::line(extent[0][0], extent[0][1], std::size_t(n[0]));
  if (dims == 2 && n.size() == 2 && extent.size() == 2 && extent[1].size() == 2)
    return Grid::plane(extent[0][0], extent[0][1], std::size_t(n[0]), extent[1][0],
                       extent[1][1], std::size_t(n[1]));
  return Grid::line(-1, 1, 2);  // placeholder; finish() reports the errors
}

Potential parse_potential(SchemaReader& r, double mass) {
  const auto type = r.string("potential.type", std::string("free"));
  if (type == "free") return Potential::free_space();
  if (type == "harmonic")
    return Potential::harmonic(r.number("potential.omega"),
                               r.number("potential.center", 0.0), mass);
  if (type == "gaussian_barrier")
    return Potential::gaussian_barrier(r.number("potential.height"),
                                       r.number("potential.width"),
                                       r.number("potential.center", 0.0));
  if (type == "eckart")
    return Potential::eckart(r.number("potential.height"), r.number("potential.width"));
  if (type == "double_slit_mask") {
    const auto centers = r.number_array("potential.slit_centers");
    const auto widths = r.number_array("potential.slit_widths");
    r.require(centers.size() == 2 && widths.size() == 2,
              "potential.slit_centers/slit_widths must each hold two entries");
    std::array<double, 2> c{0, 0}, w{0, 0};
    if (centers.size() == 2) c = {centers[0], centers[1]};
    if (widths.size() == 2) w = {widths[0], widths[1]};
    return Potential::double_slit_mask(r.number("potential.wall_x", 0.0),
                                       r.number("potential.thickness", 0.5), c, w,
                                       r.number("potential.height"));
  }
  r.require(false, "potential.type '" + type + "' is not one of free, harmonic, "
            "gaussian_barrier, eckart, double_slit_mask");
  return Potential::free_space();
}

struct TimeBlock {
  double dt = 1e-3;
  std::size_t n_steps = 0;
  std::size_t save_every = 0;
};

TimeBlock parse_time(SchemaReader& r) {
  TimeBlock t;
  t.dt = r.number("time.dt");
  t.n_steps = std::size_t(r.integer("time.n_steps"));
  t.save_every = std::size_t(r.integer("time.save_every", 0));
  r.require(t.dt > 0.0, "time.dt must be positive");
  return t;
}

struct Emitter {
  fs::path dir;
  std::vector<std::string> outputs;
  std::string path(const std::string& name) {
    outputs.push_back(name);
    return (dir / name).string();
  }
};

void write_manifest(const Emitter& em, const std::string& config_text, std::uint64_t seed) {
  nlohmann::json m;
  m["config_hash"] = fnv1a_hex(config_text);
  m["seed"] = seed;
  m["version"] = kVersion;
  m["outputs"] = nlohmann::json::array();
  for (const auto& name : em.outputs) {
    const auto full = (em.dir / name).string();
    m["outputs"].push_back({{"path", name},
                            {"checksum", file_checksum(full)},
                            {"bytes", fs::file_size(full)}});
  }
  std::ofstream os(em.dir / "manifest.json");
  os << m.dump(2) << '\n';
}

SchrodingerField parse_initial_field(SchemaReader& r, const Grid& grid, double hbar,
                                     double mass) {
  const auto q0 = r.number_array("initial.q0");
  const auto p0 = r.number_array("initial.p0");
  const auto gr = r.number_array("initial.gamma_re");
  const auto gi = r.number_array("initial.gamma_im", std::vector<double>(q0.size(), 0.0));
  const auto need = std::size_t(grid.dims);
  r.require(q0.size() == need && p0.size() == need && gr.size() == need,
            "initial.q0/p0/gamma_re must have one entry per axis");
  std::array<double, 2> aq{0, 0}, ap{0, 0};
  std::array<std::complex<double>, 2> ag{1.0, 1.0};
  for (std::size_t a = 0; a < need && a < q0.size() && a < p0.size() && a < gr.size(); ++a) {
    aq[a] = q0[a];
    ap[a] = p0[a];
    ag[a] = {gr[a], a < gi.size() ? gi[a] : 0.0};
  }
  return init_coherent_state(grid, aq, ap, ag, hbar, mass);
}

// --- scenario bodies -------------------------------------------------------

void run_grid(SchemaReader& r, Emitter& em, std::uint64_t) {
  const double hbar = r.number("hbar", 1.0);
  const double mass = r.number("mass", 1.0);
  const auto grid = parse_grid(r);
  const auto pot = parse_potential(r, mass);
  const auto time = parse_time(r);
  const bool real_vector = r.boolean("grid.real_vector", false);
  auto field = parse_initial_field(r, grid, hbar, mass);
  r.finish();

  SplitStepPropagator prop(grid, pot, hbar, mass);
  std::vector<ObservableRecord> series;
  series.push_back(observe(field, pot));
  write_owf1(em.path("field_000000.owf"), field);
  const std::size_t save = time.save_every ? time.save_every : time.n_steps;
  std::size_t done = 0;
  while (done < time.n_steps) {
    const auto chunk = std::min(save, time.n_steps - done);
    auto prev = field;
    field = real_vector ? prop.propagate_real_vector(field, time.dt, chunk)
                        : prop.propagate_complex(field, time.dt, chunk);
    done += chunk;
    auto recd = observe(field, pot);
    const auto one = real_vector ? prop.propagate_real_vector(prev, time.dt, 1)
                                 : prop.propagate_complex(prev, time.dt, 1);
    recd.continuity_residual = continuity_residual(prev, one);
    series.push_back(recd);
    std::ostringstream name;
    name << "field_" << std::setw(6) << std::setfill('0') << done << ".owf";
    write_owf1(em.path(name.str()), field);
  }
  write_observable_csv(em.path("observables.csv"), series, grid.dims);
}

void run_paths(SchemaReader& r, Emitter& em, std::uint64_t seed) {
  const double hbar = r.number("hbar", 1.0);
  const double mass = r.number("mass", 1.0);
  const auto grid = parse_grid(r);
  const auto pot = parse_potential(r, mass);
  const auto time = parse_time(r);
  auto field = parse_initial_field(r, grid, hbar, mass);
  EnsembleOptions opt;
  opt.seed = seed;
  opt.n_paths = std::size_t(r.integer("paths.n"));
  opt.dt = time.dt;
  opt.n_steps = time.n_steps;
  opt.record_stride = std::size_t(r.integer("paths.record_stride", 0));
  opt.noise_scale = r.number("paths.noise_scale", 1.0);
  const auto save_every = time.save_every ? time.save_every : 10;
  r.finish();

  SplitStepPropagator prop(grid, pot, hbar, mass);
  const auto seq = FieldSequence::record(prop, field, time.dt, time.n_steps, save_every);
  const auto ens = sample_ensemble(seq, opt);
  write_ensemble_csv(em.path("paths.csv"), ens, grid.dims);

  std::ofstream os(em.path("endpoints.csv"));
  os << "stream_id,x\n" << std::setprecision(17);
  for (std::size_t i = 0; i < ens.endpoints_x.size(); ++i)
    os << i << ',' << ens.endpoints_x[i] << '\n';
}

void run_double_slit(SchemaReader& r, Emitter& em, std::uint64_t seed) {
  DoubleSlitConfig cfg;
  cfg.hbar = r.number("hbar", 1.0);
  cfg.mass = r.number("mass", 1.0);
  cfg.grid = parse_grid(r);
  cfg.potential = parse_potential(r, cfg.mass);
  const auto time = parse_time(r);
  cfg.dt = time.dt;
  cfg.n_steps = time.n_steps;
  cfg.save_every = time.save_every;
  const auto q0 = r.number_array("initial.q0");
  const auto p0 = r.number_array("initial.p0");
  const auto gr = r.number_array("initial.gamma_re");
  r.require(q0.size() == 2 && p0.size() == 2 && gr.size() == 2,
            "initial.q0/p0/gamma_re must have two entries");
  if (q0.size() == 2) cfg.q0 = {q0[0], q0[1]};
  if (p0.size() == 2) cfg.p0 = {p0[0], p0[1]};
  if (gr.size() == 2) cfg.gamma_r = {gr[0], gr[1]};
  cfg.n_paths = std::size_t(r.integer("paths.n"));
  cfg.detect_x = r.number("double_slit.detect_x");
  cfg.bins = std::size_t(r.integer("double_slit.bins", 64));
  cfg.absorb_fraction = r.number("double_slit.absorb_fraction", 0.08);
  cfg.seed = seed;
  r.finish();

  const auto res = double_slit_run(cfg);
  write_spots_csv(em.path("spots.csv"), res);
  write_fringe_csv(em.path("fringe.csv"), res);
  for (std::size_t i = 0; i < res.snapshots.size(); ++i) {
    std::ostringstream name;
    name << "field_" << std::setw(6) << std::setfill('0') << i << ".owf";
    write_owf1(em.path(name.str()), res.snapshots[i]);
  }
}

std::unique_ptr<TrialFamily> parse_family(SchemaReader& r, const Potential& pot, double hbar,
                                          double mass) {
  const auto name = r.string("param_flow.family", std::string("coherent_state"));
  const double alpha = r.number("param_flow.alpha", 0.5);
  if (name == "coherent_state") return make_coherent_family(alpha, pot, hbar, mass);
  if (name == "skewed_gaussian")
    return make_skewed_family(alpha, r.number("param_flow.skew", 0.2), pot, hbar, mass);
  if (name == "two_gaussian_sum")
    return make_two_gaussian_family(alpha, r.number("param_flow.alpha2", alpha), pot, hbar,
                                    mass);
  r.require(false, "param_flow.family must be coherent_state, skewed_gaussian or "
            "two_gaussian_sum");
  return make_coherent_family(alpha, pot, hbar, mass);
}

void run_param_flow(SchemaReader& r, Emitter& em, std::uint64_t) {
  const double hbar = r.number("hbar", 1.0);
  const double mass = r.number("mass", 1.0);
  const auto pot = parse_potential(r, mass);
  const auto time = parse_time(r);
  auto family = parse_family(r, pot, hbar, mass);
  ParameterState s;
  s.u = r.number_array("param_flow.u0");
  s.v = r.number_array("param_flow.v0");
  const auto flow = r.string("param_flow.flow", std::string("alternate"));
  r.require(s.u.size() == family->n_pairs() && s.v.size() == family->n_pairs(),
            "param_flow.u0/v0 must match the family's pair count");
  r.require(flow == "alternate" || flow == "hamilton" || flow == "flux",
            "param_flow.flow must be alternate, hamilton or flux");
  r.finish();

  family->validate_gradients(s);
  FlowReport rep;
  if (flow == "alternate") {
    rep = alternate_compose(*family, s, time.dt, time.n_steps);
  } else {
    auto log_state = [&](const ParameterState& st) {
      FlowRecord row;
      row.time = st.time;
      row.u = st.u;
      row.v = st.v;
      row.energy = family->energy(st);
      row.norm_rate = flux_defect(*family, st);
      row.det_pair = wellposedness_determinant(*family, st);
      rep.rows.push_back(std::move(row));
    };
    log_state(s);
    for (std::size_t k = 0; k < time.n_steps; ++k) {
      s = flow == "hamilton" ? hamilton_flow_step(*family, s, time.dt)
                             : flux_flow_step(*family, s, time.dt);
      log_state(s);
    }
    rep.final_state = s;
  }
  write_flow_csv(em.path("flow.csv"), rep);
}

void run_adf(SchemaReader& r, Emitter& em, std::uint64_t) {
  const double hbar = r.number("hbar", 1.0);
  const double mass = r.number("mass", 1.0);
  const auto pot = parse_potential(r, mass);
  const auto time = parse_time(r);
  AdfState s;
  s.center = {r.number("adf.q0"), r.number("adf.p0"), 0.0, mass, 0.0};
  s.bundle = make_parallel_bundle(s.center);
  s.exponent = make_exponent(r.number("adf.c0"), r.number("adf.d0", 0.0), s.bundle);
  const bool emit_field = r.has("grid.dims");
  Grid grid = emit_field ? parse_grid(r) : Grid::line(-1, 1, 2);
  r.finish();

  const auto stride = time.save_every ? time.save_every : 1;
  const auto traj = propagate_adf(s, pot, hbar, time.dt, time.n_steps, stride);
  write_adf_csv(em.path("adf.csv"), traj);
  if (emit_field) {
    const auto f = evaluate_adf(traj.final_state.center, traj.final_state.exponent,
                                traj.final_state.bundle, grid, hbar);
    write_owf1(em.path("adf_final.owf"), f);
  }
}

void run_branch(SchemaReader& r, Emitter& em, std::uint64_t) {
  const double hbar = r.number("hbar", 1.0);
  const double mass = r.number("mass", 1.0);
  const auto pot = parse_potential(r, mass);
  const auto time = parse_time(r);
  const auto grid = parse_grid(r);
  auto tree = make_branch_root(
      r.number("branch.q0"), r.number("branch.p0"),
      {r.number("branch.gamma_re"), r.number("branch.gamma_im", 0.0)}, mass, hbar);
  BranchSchedule sched;
  sched.check_every = std::size_t(r.integer("branch.check_every", 50));
  sched.kappa = r.number("branch.kappa", 1.0);
  sched.gamma2_factor = r.number("branch.gamma2_factor", 8.0);
  sched.n_quadrature = std::size_t(r.integer("branch.n_quadrature", 16));
  sched.max_generations = std::size_t(r.integer("branch.max_generations", 2));
  tree.leaf_cap = std::size_t(r.integer("branch.leaf_cap", 100000));
  r.finish();

  branch_propagate(tree, pot, time.dt, time.n_steps, sched);
  write_tree_jsonl(em.path("tree.jsonl"), tree);
  auto f = superpose(tree, grid);
  write_owf1(em.path("superposed.owf"), f);
}

void run_feynman_kac(SchemaReader& r, Emitter& em, std::uint64_t seed) {
  const double mass = r.number("mass", 1.0);
  const auto pot = parse_potential(r, mass);
  const double lambda = r.number("feynman_kac.lambda", 1.0);
  const double D = r.number("feynman_kac.diffusion_d", 0.5);
  const double t = r.number("feynman_kac.t", 1.0);
  const auto targets = r.number_array("feynman_kac.targets");
  const auto n_samples = std::size_t(r.integer("feynman_kac.n_samples", 100000));
  const auto n_time_steps = std::size_t(r.integer("feynman_kac.n_time_steps", 200));
  r.require(t > 0.0, "feynman_kac.t must be positive");
  r.finish();

  std::ofstream os(em.path("green.csv"));
  os << "x,value,std_error\n" << std::setprecision(17);
  for (double x : targets) {
    const auto g = feynman_kac_estimate(pot, lambda, D, x, t, n_samples, n_time_steps, seed);
    os << x << ',' << g.value << ',' << g.std_error << '\n';
  }
}

}  // namespace

int run_scenario_file(const std::string& config_path, const std::string& out_dir,
                      std::optional<std::uint64_t> seed_override, const std::string& filter) {
  try {
    const auto cfg = ConfigFile::parse_file(config_path);
    SchemaReader reader(cfg);
    const auto scenario = reader.string("scenario");
    const auto seed = seed_override.value_or(reader.uinteger("seed", 0));
    reader.uinteger("seed", 0);  // consume even when overridden

    if (scenario == "verify") {
      reader.finish();
      const bool ok = acceptance::run_suite(std::cout, filter);
      return ok ? 0 : 5;
    }

    Emitter em;
    em.dir = out_dir;
    fs::create_directories(em.dir);

    if (scenario == "grid") run_grid(reader, em, seed);
    else if (scenario == "paths") run_paths(reader, em, seed);
    else if (scenario == "double_slit") run_double_slit(reader, em, seed);
    else if (scenario == "param_flow") run_param_flow(reader, em, seed);
    else if (scenario == "adf") run_adf(reader, em, seed);
    else if (scenario == "branch") run_branch(reader, em, seed);
    else if (scenario == "feynman_kac") run_feynman_kac(reader, em, seed);
    else
      throw config_error("unknown scenario '" + scenario + "'");

    write_manifest(em, cfg.text(), seed);
    return 0;
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return config_error::exit_code;
  } catch (const instability_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return instability_error::exit_code;
  } catch (const resource_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return resource_error::exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace ow
