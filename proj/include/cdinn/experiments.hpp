#pragma once

#include <functional>

#include "cdinn/csv.hpp"
#include "cdinn/model_io.hpp"
#include "cdinn/optimize.hpp"
#include "cdinn/scaler.hpp"
#include "cdinn/train.hpp"

namespace cdinn {

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::size_t epochs = 800;
  int restarts = 3;
  double lr = 1e-2;
  std::size_t n_override = 0;  // shrink sampled datasets (smoke runs); 0 = defaults
};

inline json config_to_json(const ExperimentConfig& c) {
  return json{{"seed", c.seed},
              {"epochs", c.epochs},
              {"restarts", c.restarts},
              {"lr", c.lr},
              {"n_override", c.n_override}};
}

inline ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  c.seed = j.at("seed").get<std::uint64_t>();
  c.epochs = j.at("epochs").get<std::size_t>();
  c.restarts = j.at("restarts").get<int>();
  c.lr = j.at("lr").get<double>();
  c.n_override = j.at("n_override").get<std::size_t>();
  return c;
}

struct ExperimentReport {
  std::string name;
  std::vector<Table> tables;
  json summary;
};

// Timing columns are reported but non-normative; manifest replay comparisons
// skip them by this suffix.
inline bool is_timing_column(const std::string& name) {
  return name.size() >= 7 && name.compare(name.size() - 7, 7, "_time_s") == 0;
}

struct ScaledData {
  Dataset data;  // scaled copy
  AffineScaler in_scaler, out_scaler;
};

inline ScaledData scale_dataset(const Dataset& ds, bool negate_targets = false) {
  ScaledData sd;
  sd.in_scaler = AffineScaler::fit(ds.inputs);
  sd.out_scaler = AffineScaler::fit(ds.targets);
  sd.data = ds;
  sd.data.inputs = sd.in_scaler.transform_rows(ds.inputs);
  sd.data.targets = sd.out_scaler.transform_rows(ds.targets);
  if (negate_targets)
    for (double& v : sd.data.targets.data) v = -v;
  return sd;
}

// Flips the sign of the network function; used to maximize through the
// minimizing CCP path. Works for any kind with an unconstrained head
// (negate it) or two symmetric trunks (swap them).
inline NetworkParams negate_network(NetworkParams net) {
  switch (net.spec.kind) {
    case NetKind::cdinn1:
    case NetKind::standard: {
      DenseLayerParams& head = net.trunks[0].back();
      require(!head.constrained, "negate_network: head is sign-constrained");
      for (double& v : head.free_weight.data) v = -v;
      for (double& v : head.passthrough_weight.data) v = -v;
      for (double& v : head.bias) v = -v;
      return net;
    }
    case NetKind::cdinn2:
      std::swap(net.trunks[0], net.trunks[1]);
      return net;
    default:
      throw std::invalid_argument("negate_network: unsupported kind");
  }
}

namespace exp_detail {

inline NetworkSpec make_spec(NetKind kind, std::size_t input_dim, std::vector<std::size_t> widths,
                             std::uint64_t seed, bool passthrough = false, bool bias = true) {
  NetworkSpec s;
  s.kind = kind;
  s.input_dim = input_dim;
  s.hidden_widths = std::move(widths);
  s.passthrough_enabled = passthrough;
  s.bias_enabled = bias;
  s.rng_seed = seed;
  return s;
}

inline TrainConfig make_tcfg(const ExperimentConfig& cfg) {
  TrainConfig t;
  t.epochs = cfg.epochs;
  t.lr = cfg.lr;
  t.seed = cfg.seed;
  t.restarts = cfg.restarts;
  return t;
}

inline std::string join_vec(const Vector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + fmt_g(v[i]);
  return s;
}

}  // namespace exp_detail

// ---------------------------------------------------------------------------
// table1: fit quality of cdinn1 with vs without pass-through layers on the
// five synthetic tasks.

inline ExperimentReport experiment_table1(const ExperimentConfig& cfg) {
  using namespace exp_detail;
  ExperimentReport rep;
  rep.name = "table1";
  Table t;
  t.name = "table1";
  t.columns = {"function", "fit_mse_with_passthrough", "fit_mse_without_passthrough"};

  const std::size_t n1 = cfg.n_override ? cfg.n_override : 100;
  const std::size_t n2 = cfg.n_override ? cfg.n_override : 200;
  struct Task {
    std::string label;
    Dataset data;
    std::vector<std::size_t> widths;
  };
  std::vector<Task> tasks;
  tasks.push_back({"1d_sine", regression_1d("sine", n1, cfg.seed), {10}});
  tasks.push_back({"1d_quadratic", regression_1d("quadratic", n1, cfg.seed + 1), {10}});
  tasks.push_back({"1d_cubic", regression_1d("cubic", n1, cfg.seed + 2), {10}});
  tasks.push_back({"2d_circles", classify_2d("circles", n2, 0.1, cfg.seed + 3), {30}});
  tasks.push_back({"2d_moons", classify_2d("moons", n2, 0.1, cfg.seed + 4), {30}});

  for (const auto& task : tasks) {
    double mses[2];
    for (int pt = 0; pt < 2; ++pt) {
      const auto spec = make_spec(NetKind::cdinn1, task.data.inputs.cols, task.widths, cfg.seed,
                                  /*passthrough=*/pt == 0);
      mses[pt] = best_fit(train_restarts(spec, task.data, make_tcfg(cfg))).final_mse;
    }
    t.add_row({task.label, fmt_g(mses[0]), fmt_g(mses[1])});
    rep.summary[task.label] = {{"with_passthrough", mses[0]},
                               {"without_passthrough", mses[1]},
                               {"ratio", mses[1] / mses[0]}};
  }
  rep.tables.push_back(std::move(t));
  return rep;
}

// ---------------------------------------------------------------------------
// regression: cdinn1 vs icnn on the three 1-D targets.

inline ExperimentReport experiment_regression(const ExperimentConfig& cfg) {
  using namespace exp_detail;
  ExperimentReport rep;
  rep.name = "regression";
  Table t;
  t.name = "regression";
  t.columns = {"function", "cdinn_fit_mse", "icnn_fit_mse"};
  const std::size_t n = cfg.n_override ? cfg.n_override : 100;
  int idx = 0;
  for (const std::string kind : {"sine", "quadratic", "cubic"}) {
    const Dataset ds = regression_1d(kind, n, cfg.seed + idx++);
    const double cdinn =
        best_fit(train_restarts(make_spec(NetKind::cdinn1, 1, {10}, cfg.seed), ds, make_tcfg(cfg)))
            .final_mse;
    const double icnn =
        best_fit(train_restarts(make_spec(NetKind::icnn, 1, {10}, cfg.seed, /*passthrough=*/true),
                                ds, make_tcfg(cfg)))
            .final_mse;
    t.add_row({kind, fmt_g(cdinn), fmt_g(icnn)});
    rep.summary[kind] = {{"cdinn_mse", cdinn}, {"icnn_mse", icnn}};
  }
  rep.tables.push_back(std::move(t));
  return rep;
}

// ---------------------------------------------------------------------------
// classification: cdinn1 fits of the two 2-D toy sets.

inline ExperimentReport experiment_classification(const ExperimentConfig& cfg) {
  using namespace exp_detail;
  ExperimentReport rep;
  rep.name = "classification";
  Table t;
  t.name = "classification";
  t.columns = {"dataset", "fit_mse"};
  const std::size_t n = cfg.n_override ? cfg.n_override : 200;
  int idx = 0;
  for (const std::string kind : {"circles", "moons"}) {
    const Dataset ds = classify_2d(kind, n, 0.1, cfg.seed + idx++);
    const double mse =
        best_fit(train_restarts(make_spec(NetKind::cdinn1, 2, {30}, cfg.seed), ds, make_tcfg(cfg)))
            .final_mse;
    t.add_row({kind, fmt_g(mse)});
    rep.summary[kind] = {{"fit_mse", mse}};
  }
  rep.tables.push_back(std::move(t));
  return rep;
}

// ---------------------------------------------------------------------------
// delay: recurrent cdinn vs recurrent icnn (both bias-free, 10 recurrent
// units) on the four-tap moving-sum task.

inline ExperimentReport experiment_delay(const ExperimentConfig& cfg) {
  using namespace exp_detail;
  ExperimentReport rep;
  rep.name = "delay";
  const std::size_t n_train = cfg.n_override ? cfg.n_override : 300;
  const std::size_t n_test = cfg.n_override ? cfg.n_override : 100;
  const Dataset train_ds = delay_dataset(n_train, 5, cfg.seed);
  const Dataset test_ds = delay_dataset(n_test, 5, cfg.seed + 1000);

  auto run = [&](NetKind kind, bool passthrough) {
    const auto spec = make_spec(kind, 1, {10}, cfg.seed, passthrough, /*bias=*/false);
    const TrainResult& best = best_fit(train_restarts(spec, train_ds, make_tcfg(cfg)));
    return std::pair<double, double>{best.final_mse, mse(best.net, test_ds)};
  };
  const auto [ricnn_train, ricnn_test] = run(NetKind::recurrent_icnn, true);
  const auto [rcdinn_train, rcdinn_test] = run(NetKind::recurrent_cdinn, false);

  Table t;
  t.name = "delay";
  t.columns = {"network", "train_mse", "test_mse"};
  t.add_row({"recurrent_icnn_no_bias", fmt_g(ricnn_train), fmt_g(ricnn_test)});
  t.add_row({"recurrent_cdinn_no_bias", fmt_g(rcdinn_train), fmt_g(rcdinn_test)});
  rep.tables.push_back(std::move(t));
  rep.summary = {{"ricnn_test_mse", ricnn_test},
                 {"rcdinn_test_mse", rcdinn_test},
                 {"ratio", rcdinn_test / ricnn_test}};
  return rep;
}

// ---------------------------------------------------------------------------
// table2: optimization benchmark functions. CDiNN variants are minimized with
// CCP; the standard net runs the filtered-beta subgradient grid. Per the
// benchmark protocol each cell trains `restarts` networks and keeps the one
// whose optimum lands closest to the function's known minimum value. Reported
// columns: y_opt is the ground-truth objective at the found input, y_pred the
// model's own (unscaled) prediction there.

// Annealed full-batch schedule for the optimization benchmarks: the surrogate
// minimum has to be placed to a few 1e-4 in scaled units, which plain 800
// epochs at a fixed step cannot reach.
inline TrainResult train_annealed(const NetworkSpec& spec, const Dataset& ds,
                                  const ExperimentConfig& cfg) {
  auto phase = [&](double base) {
    return std::max<std::size_t>(1, std::size_t(base * double(cfg.epochs) / 800.0));
  };
  TrainResult res = train(build(spec), ds, {phase(3000), cfg.lr, 0, 1});
  res = train(res.net, ds, {phase(2000), cfg.lr / 10.0, 0, 1});
  res = train(res.net, ds, {phase(1000), cfg.lr / 100.0, 0, 1});
  return res;
}

inline ExperimentReport experiment_table2(const ExperimentConfig& cfg) {
  using namespace exp_detail;
  ExperimentReport rep;
  rep.name = "table2";
  Table t;
  t.name = "table2";
  t.columns = {"function", "architecture", "algorithm",  "precision",   "params",
               "fit_mse",  "y_opt",        "y_pred",     "x_opt",       "iterations",
               "termination", "exec_time_s"};

  struct Func {
    std::string label;
    Dataset data;
    Vector x0_orig;
    double (*truth)(const Vector&);
  };
  std::vector<Func> funcs;
  funcs.push_back(
      {"camel", grid_dataset_2d(camel3_plus5, "camel", -5.0, 5.0, 41), {1.0, 1.0}, camel3_plus5});
  funcs.push_back({"sumpower", lattice_dataset_5d(sumpower_plus5, "sumpower", 5, 875, cfg.seed),
                   {-1.0, -1.0, -1.0, -1.0, -1.0},
                   sumpower_plus5});
  funcs.push_back({"matyas", grid_dataset_2d(matyas_plus5, "matyas", -10.0, 10.0, 41), {1.0, 1.0},
                   matyas_plus5});

  const double true_min = 5.0;
  for (const auto& fn : funcs) {
    const ScaledData sd = scale_dataset(fn.data);
    const std::size_t d = sd.data.inputs.cols;
    const auto cons = ConstraintSet::box(Vector(d, -1.0), Vector(d, 1.0));
    const Vector x0 = sd.in_scaler.transform(fn.x0_orig);
    // Stopping precisions are stated in original output units; the optimizers
    // see the scaled model, so convert through the output range.
    const double tol_scale = 2.0 / (sd.out_scaler.maxs[0] - sd.out_scaler.mins[0]);

    struct Picked {
      OptimTrace trace;
      double fit_mse = 0.0;
      double y_true = 0.0;
      double y_pred = 0.0;
    };
    auto pick_best = [&](const std::vector<TrainResult>& runs, auto&& optimize) {
      Picked best;
      double best_gap = kInf;
      for (const auto& run : runs) {
        OptimTrace trace = optimize(run.net);
        const Vector x_orig = sd.in_scaler.inverse_transform(trace.last().x);
        const double y_true = fn.truth(x_orig);
        if (std::abs(y_true - true_min) < best_gap) {
          best_gap = std::abs(y_true - true_min);
          best.y_true = y_true;
          best.y_pred = sd.out_scaler.inverse1(trace.last().objective);
          best.fit_mse = run.final_mse;
          best.trace = std::move(trace);
        }
      }
      return best;
    };
    auto add_row = [&](const std::string& arch, const std::string& algo, double precision,
                       const std::string& params, const Picked& p) {
      t.add_row({fn.label, arch, algo, fmt_g(precision), params, fmt_g(p.fit_mse),
                 fmt_g(p.y_true), fmt_g(p.y_pred),
                 join_vec(sd.in_scaler.inverse_transform(p.trace.last().x)),
                 std::to_string(p.trace.iterates.size() - 1), to_string(p.trace.termination),
                 fmt_g(p.trace.seconds)});
    };

    // CDiNN-1 and CDiNN-2 with CCP at both stopping precisions.
    for (NetKind kind : {NetKind::cdinn1, NetKind::cdinn2}) {
      const auto spec = make_spec(kind, d,
                                  kind == NetKind::cdinn1 ? std::vector<std::size_t>{30}
                                                          : std::vector<std::size_t>{15},
                                  cfg.seed);
      std::vector<TrainResult> runs;
      for (int r = 0; r < cfg.restarts; ++r) {
        NetworkSpec s = spec;
        s.rng_seed = cfg.seed + std::uint64_t(r);
        runs.push_back(train_annealed(s, sd.data, cfg));
      }
      for (const auto& [tol, iters] :
           std::vector<std::pair<double, std::size_t>>{{1e-3, 200}, {1e-5, 500}}) {
        CcpConfig ccfg;
        ccfg.tolerance = tol * tol_scale;
        ccfg.max_iterations = iters;
        ccfg.x0 = x0;
        const Picked p = pick_best(
            runs, [&](const NetworkParams& net) { return ccp_optimize(net, cons, ccfg); });
        add_row(to_string(kind), "ccp", tol, "", p);
        if (tol == 1e-3)
          rep.summary[fn.label][to_string(kind)] = {
              {"fit_mse", p.fit_mse}, {"y_opt", p.y_true}, {"y_pred", p.y_pred}};
      }
    }

    // Standard net with the subgradient step-size grid. These nets keep the
    // plain 800-epoch protocol (no anneal): the baseline is evaluated as
    // trained hyperparameter-for-hyperparameter, not polished further. Rows
    // report the per-arm best restart; the summary also keeps each arm's
    // worst restart so the large-step blow-up stays visible.
    {
      const auto spec = make_spec(NetKind::standard, d, {30}, cfg.seed);
      const auto runs = train_restarts(spec, sd.data, make_tcfg(cfg));
      rep.summary[fn.label]["standard"]["fit_mse"] = best_fit(runs).final_mse;
      for (double alpha0 : {0.01, 0.1, 5.0, 10.0}) {
        for (StepSchedule sched : {StepSchedule::constant, StepSchedule::over_k}) {
          SubgradConfig scfg;
          scfg.alpha0 = alpha0;
          scfg.schedule = sched;
          scfg.beta = 0.25;
          scfg.max_iterations = 200;
          scfg.tolerance = 1e-3 * tol_scale;
          scfg.x0 = x0;
          double worst = -kInf;
          Picked best;
          double best_gap = kInf;
          for (const auto& run : runs) {
            OptimTrace trace = filtered_subgrad(run.net, cons, scfg);
            const Vector x_orig = sd.in_scaler.inverse_transform(trace.last().x);
            const double y_true = fn.truth(x_orig);
            worst = std::max(worst, y_true);
            if (std::abs(y_true - true_min) < best_gap) {
              best_gap = std::abs(y_true - true_min);
              best.y_true = y_true;
              best.y_pred = sd.out_scaler.inverse1(trace.last().objective);
              best.fit_mse = run.final_mse;
              best.trace = std::move(trace);
            }
          }
          const std::string params = "alpha0=" + fmt_g(alpha0) + " sched=" + to_string(sched);
          add_row("standard", "filtered_subgrad", 1e-3, params, best);
          const std::string key = "a" + fmt_g(alpha0) + "_" + to_string(sched);
          rep.summary[fn.label]["standard"]["subgrad"][key] = best.y_true;
          rep.summary[fn.label]["standard"]["subgrad_worst"][key] = worst;
        }
      }
    }
  }
  rep.tables.push_back(std::move(t));
  return rep;
}

// ---------------------------------------------------------------------------
// spill: fits of all four architectures on the two-spill pollutant field plus
// the constrained maximization of the learned concentration (tables 3 and 4).

inline ExperimentReport experiment_spill(const ExperimentConfig& cfg) {
  using namespace exp_detail;
  ExperimentReport rep;
  rep.name = "spill";

  SpillParams params;
  const Dataset train_raw = spill_dataset(params, 0.02);
  const Dataset test_raw = spill_dataset(params, 0.05);

  Table fit_table;
  fit_table.name = "table3";
  fit_table.columns = {"network", "train_mse", "test_mse"};
  Table opt_table;
  opt_table.name = "table4";
  opt_table.columns = {"network",     "x0",          "step_size", "d_opt",
                       "t_opt",       "y_opt_scaled", "y_opt",    "iterations",
                       "termination", "exec_time_s"};

  // Search region: affine constraints d >= 0.35, t >= 5.25 in original units;
  // the box covers the trained region extended to the (exterior) start point.
  const Vector x0_orig = {1.2, 15.2};
  const Vector box_lo_orig = {params.loc_min, params.time_min};
  const Vector box_hi_orig = {std::max(params.loc_max, x0_orig[0]),
                              std::max(params.time_max, x0_orig[1])};
  const Matrix g_orig = Matrix::from_rows({{-1.0, 0.0}, {0.0, -1.0}});
  const Vector h_orig = {-0.35, -5.25};

  struct Arm {
    std::string label;
    NetKind kind;
    std::vector<std::size_t> widths;
    bool negate_targets;  // icnn learns the negated (concave) field
  };
  const std::vector<Arm> arms = {{"standard", NetKind::standard, {30}, false},
                                 {"icnn", NetKind::icnn, {30}, true},
                                 {"cdinn1", NetKind::cdinn1, {30}, false},
                                 {"cdinn2", NetKind::cdinn2, {15}, false}};

  TrainConfig tcfg = make_tcfg(cfg);
  tcfg.restarts = 2;  // two repeats, best optimization kept

  for (const auto& arm : arms) {
    const ScaledData sd = scale_dataset(train_raw, arm.negate_targets);
    Dataset test_scaled = test_raw;
    test_scaled.inputs = sd.in_scaler.transform_rows(test_raw.inputs);
    test_scaled.targets = sd.out_scaler.transform_rows(test_raw.targets);
    if (arm.negate_targets)
      for (double& v : test_scaled.targets.data) v = -v;

    const auto spec =
        make_spec(arm.kind, 2, arm.widths, cfg.seed, arm.kind == NetKind::icnn);
    const auto runs = train_restarts(spec, sd.data, tcfg);

    double train_mse_best = kInf, test_mse_best = kInf;
    for (const auto& run : runs) {
      train_mse_best = std::min(train_mse_best, run.final_mse);
      test_mse_best = std::min(test_mse_best, mse(run.net, test_scaled));
    }
    fit_table.add_row({arm.label, fmt_g(train_mse_best), fmt_g(test_mse_best)});
    rep.summary["fit"][arm.label] = {{"train_mse", train_mse_best}, {"test_mse", test_mse_best}};

    const auto cons =
        sd.in_scaler.scale_constraints(box_lo_orig, box_hi_orig, g_orig, h_orig);
    const Vector x0 = sd.in_scaler.transform(x0_orig);
    // Stopping precision stated in concentration units, applied to the scaled
    // model the optimizers actually see.
    const double tol_scale = 2.0 / (sd.out_scaler.maxs[0] - sd.out_scaler.mins[0]);

    // Scaled model output -> original concentration units (undo negation for
    // the icnn arm).
    auto conc_unscaled = [&](double y_scaled) {
      return sd.out_scaler.inverse1(arm.negate_targets ? -y_scaled : y_scaled);
    };

    if (arm.kind == NetKind::standard) {
      // Gradient ascent with box clipping; the affine constraints are
      // box-shaped here, so the equivalent feasible box stands in for them.
      const auto ascent_box = sd.in_scaler.scale_constraints(
          {0.35, 5.25}, box_hi_orig, Matrix(0, 2), {});
      for (double alpha0 : {0.01, 10.0, 0.1}) {
        SubgradConfig scfg;
        scfg.alpha0 = alpha0;
        scfg.beta = 0.25;
        scfg.schedule = StepSchedule::constant;
        scfg.max_iterations = 200;
        scfg.tolerance = 1e-3 * tol_scale;
        scfg.x0 = ascent_box.clip_to_box(x0);
        const OptimTrace* keep = nullptr;
        std::vector<OptimTrace> traces;
        for (const auto& run : runs)
          traces.push_back(filtered_subgrad(run.net, ascent_box, scfg, /*maximize=*/true));
        for (const auto& tr : traces)
          if (!keep || tr.last().objective > keep->last().objective) keep = &tr;
        const Vector x_orig = sd.in_scaler.inverse_transform(keep->last().x);
        opt_table.add_row({arm.label, join_vec(x0_orig), fmt_g(alpha0), fmt_g(x_orig[0]),
                           fmt_g(x_orig[1]), fmt_g(keep->last().objective),
                           fmt_g(conc_unscaled(keep->last().objective)),
                           std::to_string(keep->iterates.size() - 1),
                           to_string(keep->termination), fmt_g(keep->seconds)});
      }
      continue;
    }

    CcpConfig ccfg;
    ccfg.tolerance = 1e-3 * tol_scale;
    ccfg.max_iterations = 200;
    ccfg.x0 = x0;
    OptimTrace best_trace;
    double best_conc = -kInf;
    bool feasible_iterates = true;
    for (const auto& run : runs) {
      // Maximize the learned concentration by minimizing its negation. The
      // icnn already learned the negated field, so it is minimized as-is.
      const NetworkParams search_net =
          arm.kind == NetKind::icnn ? run.net : negate_network(run.net);
      OptimTrace trace = ccp_optimize(search_net, cons, ccfg);
      // Scaled output of the arm's trained net at the final iterate.
      const double model_out = arm.kind == NetKind::icnn ? trace.last().objective
                                                         : -trace.last().objective;
      const double conc = conc_unscaled(model_out);
      if (conc > best_conc) {
        best_conc = conc;
        feasible_iterates = true;
        for (const auto& it : trace.iterates)
          feasible_iterates = feasible_iterates && cons.contains(it.x, 1e-8);
        best_trace = std::move(trace);
      }
    }
    const Vector x_orig = sd.in_scaler.inverse_transform(best_trace.last().x);
    const double conc_scaled = sd.out_scaler.transform1(best_conc);
    opt_table.add_row({arm.label, join_vec(x0_orig), "", fmt_g(x_orig[0]), fmt_g(x_orig[1]),
                       fmt_g(conc_scaled), fmt_g(best_conc),
                       std::to_string(best_trace.iterates.size() - 1),
                       to_string(best_trace.termination), fmt_g(best_trace.seconds)});
    rep.summary["opt"][arm.label] = {{"d", x_orig[0]},
                                     {"t", x_orig[1]},
                                     {"y_opt", best_conc},
                                     {"iterates_feasible", feasible_iterates}};
  }

  rep.tables.push_back(std::move(fit_table));
  rep.tables.push_back(std::move(opt_table));
  return rep;
}

inline ExperimentReport run_experiment(const std::string& name, const ExperimentConfig& cfg) {
  if (name == "table1") return experiment_table1(cfg);
  if (name == "regression") return experiment_regression(cfg);
  if (name == "classification") return experiment_classification(cfg);
  if (name == "delay") return experiment_delay(cfg);
  if (name == "table2") return experiment_table2(cfg);
  if (name == "spill" || name == "table3" || name == "table4") return experiment_spill(cfg);
  throw std::invalid_argument("run_experiment: unknown experiment " + name);
}

}  // namespace cdinn
