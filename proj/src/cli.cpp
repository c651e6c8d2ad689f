// Copyright 2026 The covx Authors
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

#include "covx/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "covx/channels.hpp"
#include "covx/io.hpp"
#include "covx/optimizer.hpp"
#include "covx/povm.hpp"
#include "covx/reps.hpp"

namespace covx::cli {

namespace {

using io::Json;

bool is_matrix_json(const Json& j) {
  return j.is_object() && j.contains("rows") && j.contains("cols") && j.contains("data");
}

void render_text(const Json& j, std::ostream& out, const std::string& indent) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const Json& v = it.value();
    out << indent << it.key() << ": ";
    if (is_matrix_json(v)) {
      out << "<" << v["rows"] << "x" << v["cols"] << " matrix>\n";
    } else if (v.is_object()) {
      out << "\n";
      render_text(v, out, indent + "  ");
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
      out << "\n";
      for (const auto& e : v) {
        out << indent << "  -";
        for (auto f = e.begin(); f != e.end(); ++f) {
          if (!is_matrix_json(f.value())) out << " " << f.key() << "=" << f.value().dump();
        }
        out << "\n";
      }
    } else {
      out << v.dump() << "\n";
    }
  }
}

void emit(const Json& j, const RunConfig& cfg, std::ostream& out) {
  if (cfg.output == OutputMode::Json) {
    out << j.dump(2) << "\n";
  } else {
    render_text(j, out, "");
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream f(path);
  if (!f) throw ParseError(path + ": cannot open for writing");
  f << j.dump(2) << "\n";
}

std::uint64_t parse_seed(const std::string& s) {
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(s, &pos, 0);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("--seed: not an integer: " + s);
  }
}

void validate(const RunConfig& cfg) {
  if (!(cfg.tol.tol > 0.0 && cfg.tol.tol < 1.0)) throw ContractViolation("--tol must lie in (0, 1)");
  if (!(cfg.tol.feas_tol > 0.0 && cfg.tol.feas_tol < 1.0)) {
    throw ContractViolation("--feas-tol must lie in (0, 1)");
  }
}

Representation trivial_group(std::size_t n) {
  return Representation::finite({ComplexMatrix::Identity(static_cast<Eigen::Index>(n),
                                                         static_cast<Eigen::Index>(n))});
}

// Representation on K (x) H from either --rep or --rep-out/--rep-in.
struct RepArgs {
  std::string rep;
  std::string rep_out;
  std::string rep_in;

  std::optional<Representation> load(double tol) const {
    if (!rep.empty()) {
      if (!rep_out.empty() || !rep_in.empty()) {
        throw ContractViolation("give either --rep or --rep-out/--rep-in, not both");
      }
      return io::load_representation(rep, tol);
    }
    if (rep_out.empty() != rep_in.empty()) {
      throw ContractViolation("--rep-out and --rep-in must be given together");
    }
    if (rep_out.empty()) return std::nullopt;
    return choi_representation(io::load_representation(rep_out, tol),
                               io::load_representation(rep_in, tol));
  }

  std::optional<std::size_t> dim_in(double tol) const {
    if (rep_in.empty()) return std::nullopt;
    return io::load_representation(rep_in, tol).dim();
  }
};

void add_rep_options(CLI::App* app, RepArgs& r) {
  app->add_option("--rep", r.rep, "representation on output (x) input");
  app->add_option("--rep-out", r.rep_out, "output representation V");
  app->add_option("--rep-in", r.rep_in, "input representation U (conjugated)");
}

CovariantChoi covariant_input(const ChoiOperator& r, const std::optional<Representation>& rep,
                              const RunConfig& cfg) {
  const Representation g = rep ? *rep : trivial_group(r.dim_in() * r.dim_out());
  const double resid = covariance_check(r, g);
  const double scale = std::max(1.0, operator_norm(r.matrix()));
  if (resid > cfg.tol.feas_tol * scale) {
    throw ContractViolation("channel is not covariant (commutator residual " +
                            std::to_string(resid) + ")");
  }
  return covariant_from_commutant(r, isotypic_decompose(g, cfg.tol.tol, cfg.rng_seed));
}

GroupElement parse_element(const std::optional<double>& angle, const std::optional<std::size_t>& index,
                           const std::string& unitary_path) {
  const int given = (angle ? 1 : 0) + (index ? 1 : 0) + (unitary_path.empty() ? 0 : 1);
  if (given != 1) throw ContractViolation("give exactly one of --angle, --index, --unitary");
  if (angle) return GroupElement::angle(*angle);
  if (index) return GroupElement::index(*index);
  return GroupElement::su(io::load_matrix(unitary_path));
}

Json example_json(const BuiltinExample& ex, const RunConfig& cfg) {
  const TniCheck tni = check_tni(ex.choi.base, cfg.tol);
  const ExtremalityReport rep = qo_extremality(ex.choi, cfg.tol);
  Json j{{"name", ex.name},
         {"description", ex.description},
         {"dim_in", ex.choi.base.dim_in()},
         {"dim_out", ex.choi.base.dim_out()},
         {"representation", io::representation_to_json(ex.rep)},
         {"decomposition", io::decomposition_to_json(ex.choi.dec)},
         {"tni", to_string(tni.verdict)},
         {"covariance_residual", covariance_check(ex.choi.base, ex.rep)},
         {"expected", {{"extremal", ex.expect_extremal},
                       {"trace_preserving", ex.expect_trace_preserving}}},
         {"report", io::report_to_json(rep)},
         {"matrix", io::channel_to_json(ex.choi.base)}};
  if (ex.fidelity) j["fidelity"] = *ex.fidelity;
  if (ex.fidelity_operator) j["fidelity_operator"] = io::matrix_to_json(*ex.fidelity_operator);
  return j;
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args) {
    if (const char* env = std::getenv("COVX_TOL")) {
      try {
        cfg_.tol.tol = std::stod(env);
      } catch (const std::exception&) {
        err_ << "error: COVX_TOL is not a number: " << env << "\n";
        return kExitError;
      }
    }
    CLI::App app{"Extremality and optimization for group-covariant POVMs and channels", "covx"};
    build(app);

    std::vector<const char*> argv{"covx"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out_ << app.help();
      return kExitTrue;
    } catch (const CLI::CallForAllHelp&) {
      out_ << app.help("", CLI::AppFormatMode::All);
      return kExitTrue;
    } catch (const CLI::ParseError& e) {
      err_ << "error: " << e.what() << "\n";
      return kExitError;
    }
    if (!action_) {
      err_ << app.help();
      return kExitError;
    }
    try {
      if (!seed_text_.empty()) cfg_.rng_seed = parse_seed(seed_text_);
      cfg_.output = output_ == "text" ? OutputMode::Text : OutputMode::Json;
      validate(cfg_);
      return action_();
    } catch (const Error& e) {
      err_ << "error: " << e.what() << "\n";
      return kExitError;
    } catch (const std::exception& e) {
      err_ << "error: " << e.what() << "\n";
      return kExitError;
    }
  }

 private:
  void build(CLI::App& app) {
    app.require_subcommand(1);
    app.add_option("--tol", cfg_.tol.tol, "relative rank threshold");
    app.add_option("--feas-tol", cfg_.tol.feas_tol, "feasibility residual");
    app.add_option("--seed", seed_text_, "RNG seed (decimal or 0x hex)");
    app.add_option("--output", output_, "report format")->check(CLI::IsMember({"json", "text"}));
    build_decompose(app);
    build_povm(app);
    build_channel(app);
    build_optimize(app);
    build_examples(app);
  }

  void build_decompose(CLI::App& app) {
    auto* sub = app.add_subcommand("decompose", "isotypic decomposition of a representation");
    sub->add_option("rep", a_.rep, "representation file")->required();
    sub->add_flag("--isometries", a_.flag, "include the aligning isometries");
    sub->callback([this] {
      action_ = [this] {
        const Representation r = io::load_representation(a_.rep, cfg_.tol.tol);
        const IsotypicDecomposition dec = isotypic_decompose(r, cfg_.tol.tol, cfg_.rng_seed);
        Json j = io::decomposition_to_json(dec, a_.flag);
        j["residual"] = decomposition_residuals(r, dec).max();
        if (cfg_.output == OutputMode::Text) {
          out_ << std::setw(8) << "k" << std::setw(8) << "d_k" << std::setw(8) << "m_k" << "\n";
          for (const auto& b : dec.blocks) {
            out_ << std::setw(8) << b.label << std::setw(8) << b.irrep_dim << std::setw(8)
                 << b.multiplicity << "\n";
          }
          out_ << "sum m_k^2 = " << dec.sum_multiplicity_squares() << "\n";
        } else {
          emit(j, cfg_, out_);
        }
        return kExitTrue;
      };
    });
  }

  void build_povm(CLI::App& app) {
    auto* povm = app.add_subcommand("povm", "covariant POVM seeds");
    povm->require_subcommand(1);

    auto* check = povm->add_subcommand("check", "feasibility of a seed");
    check->add_option("seed", a_.matrix, "seed matrix file")->required();
    check->add_option("rep", a_.rep, "representation file")->required();
    check->callback([this] {
      action_ = [this] {
        const auto [xi, dec] = load_seed();
        const SeedCheck c = check_seed(xi, dec, cfg_.tol);
        emit(Json{{"feasible", c.feasible},
                  {"psd", c.psd},
                  {"min_eigenvalue", c.min_eigenvalue},
                  {"block_residuals", c.block_residuals}},
             cfg_, out_);
        return c.feasible ? kExitTrue : kExitFalse;
      };
    });

    for (const char* name : {"extremal", "witness"}) {
      auto* sub = povm->add_subcommand(name, std::string(name) == "extremal"
                                                 ? "extremality verdict for a seed"
                                                 : "perturbation witness for a seed");
      sub->add_option("seed", a_.matrix, "seed matrix file")->required();
      sub->add_option("rep", a_.rep, "representation file")->required();
      sub->add_option("--witness-out", a_.out_path, "write the witness matrix here");
      const bool witness_mode = std::string(name) == "witness";
      sub->callback([this, witness_mode] {
        action_ = [this, witness_mode] {
          auto [xi, dec] = load_seed();
          const PovmSeed seed = make_seed(std::move(xi), std::move(dec), cfg_.tol);
          const ExtremalityReport rep = extremality(seed, cfg_.tol);
          return finish_report(rep, witness_mode);
        };
      });
    }

    auto* prob = povm->add_subcommand("prob", "probability density at a group element");
    prob->add_option("seed", a_.matrix, "seed matrix file")->required();
    prob->add_option("rep", a_.rep, "representation file")->required();
    prob->add_option("--rho", a_.rho, "density matrix file")->required();
    prob->add_option("--angle", a_.angle, "U(1) angle");
    prob->add_option("--index", a_.index, "finite group element index");
    prob->add_option("--unitary", a_.unitary, "SU(d) element matrix file");
    prob->callback([this] {
      action_ = [this] {
        auto [xi, dec] = load_seed();
        const Representation r = io::load_representation(a_.rep, cfg_.tol.tol);
        const PovmSeed seed = make_seed(std::move(xi), std::move(dec), cfg_.tol);
        const GroupElement g = parse_element(a_.angle, a_.index, a_.unitary);
        const double p = probability_density(seed, r, io::load_matrix(a_.rho), g, cfg_.tol.feas_tol);
        emit(Json{{"density", p}}, cfg_, out_);
        return kExitTrue;
      };
    });
  }

  void build_channel(CLI::App& app) {
    auto* ch = app.add_subcommand("channel", "covariant quantum operations in Choi form");
    ch->require_subcommand(1);

    auto* check = ch->add_subcommand("check", "CP, trace and covariance constraints");
    check->add_option("channel", a_.matrix, "channel file")->required();
    add_rep_options(check, a_.reps);
    check->callback([this] {
      action_ = [this] {
        const ChoiOperator r = io::load_channel(a_.matrix);
        const TniCheck t = check_tni(r, cfg_.tol);
        Json j{{"tni", to_string(t.verdict)},
               {"completely_positive", t.completely_positive},
               {"min_eigenvalue", t.min_eigenvalue_r},
               {"k_min_eigenvalue", t.min_eigenvalue_k},
               {"k_max_eigenvalue", t.max_eigenvalue_k},
               {"k", io::matrix_to_json(t.k)}};
        bool ok = t.verdict != TniVerdict::Violating;
        if (const auto rep = a_.reps.load(cfg_.tol.tol)) {
          const double resid = covariance_check(r, *rep);
          j["covariance_residual"] = resid;
          j["covariant"] = resid <= cfg_.tol.feas_tol * std::max(1.0, operator_norm(r.matrix()));
          ok = ok && j["covariant"].get<bool>();
        }
        emit(j, cfg_, out_);
        return ok ? kExitTrue : kExitFalse;
      };
    });

    for (const char* name : {"extremal", "witness"}) {
      const bool witness_mode = std::string(name) == "witness";
      auto* sub = ch->add_subcommand(name, witness_mode ? "perturbation witness for a channel"
                                                        : "extremality verdict for a channel");
      sub->add_option("channel", a_.matrix, "channel file")->required();
      add_rep_options(sub, a_.reps);
      sub->add_option("--witness-out", a_.out_path, "write the witness matrix here");
      sub->callback([this, witness_mode] {
        action_ = [this, witness_mode] {
          const ChoiOperator r = io::load_channel(a_.matrix);
          const CovariantChoi cov = covariant_input(r, a_.reps.load(cfg_.tol.tol), cfg_);
          return finish_report(qo_extremality(cov, cfg_.tol), witness_mode);
        };
      });
    }

    auto* apply = ch->add_subcommand("apply", "Schrodinger action on a state");
    apply->add_option("channel", a_.matrix, "channel file")->required();
    apply->add_option("--rho", a_.rho, "density matrix file")->required();
    apply->callback([this] {
      action_ = [this] {
        const ChoiOperator r = io::load_channel(a_.matrix);
        const ComplexMatrix rho = io::load_matrix(a_.rho);
        if (!is_psd(rho, cfg_.tol.feas_tol)) throw ContractViolation("rho is not PSD");
        const ComplexMatrix out = apply_channel(r, rho);
        emit(Json{{"matrix", io::matrix_to_json(out)}, {"trace", out.trace().real()}}, cfg_, out_);
        return kExitTrue;
      };
    });

    auto* example = ch->add_subcommand("example", "built-in covariant channels");
    example->add_option("name", a_.name, "example name")->required();
    example->add_option("--d", a_.d, "dimension for the SU(d) examples");
    example->add_option("--check", a_.check, "exit code follows this verdict")
        ->check(CLI::IsMember({"extremal", "tni", "covariance"}));
    example->add_option("--out", a_.out_path, "write the channel file here");
    example->callback([this] {
      action_ = [this] {
        const BuiltinExample ex = builtin_example(a_.name, a_.d);
        const Json j = example_json(ex, cfg_);
        if (!a_.out_path.empty()) write_json_file(a_.out_path, io::channel_to_json(ex.choi.base));
        emit(j, cfg_, out_);
        if (a_.check == "extremal") {
          return j["report"]["verdict"] == "extremal" ? kExitTrue : kExitFalse;
        }
        if (a_.check == "tni") return j["tni"] != "violating" ? kExitTrue : kExitFalse;
        if (a_.check == "covariance") {
          return j["covariance_residual"].get<double>() <= cfg_.tol.feas_tol ? kExitTrue
                                                                             : kExitFalse;
        }
        return kExitTrue;
      };
    });
  }

  void build_optimize(CLI::App& app) {
    auto* opt = app.add_subcommand("optimize", "maximize Tr[W Z] over a covariant set");
    opt->require_subcommand(1);
    for (const char* name : {"povm", "channel"}) {
      const bool channel = std::string(name) == "channel";
      auto* sub = opt->add_subcommand(name, channel ? "over covariant Choi operators"
                                                    : "over covariant POVM seeds");
      sub->add_option("--cost", a_.matrix, "cost operator W file")->required();
      sub->add_option("--restarts", a_.restarts, "number of restarts");
      sub->add_option("--out", a_.out_path, "write the report here as well");
      if (channel) {
        add_rep_options(sub, a_.reps);
        sub->add_option("--dim-in", a_.dim_in, "input dimension when --rep is used");
        sub->add_option("--target", a_.rho, "Tr_K target K file (default identity)");
      } else {
        sub->add_option("--rep", a_.reps.rep, "representation file")->required();
      }
      sub->callback([this, channel] {
        action_ = [this, channel] { return channel ? optimize_channel() : optimize_povm(); };
      });
    }
  }

  void build_examples(CLI::App& app) {
    auto* sub = app.add_subcommand("examples", "all built-in instances");
    sub->add_option("--d", a_.d, "dimension for the SU(d) examples");
    sub->callback([this] {
      action_ = [this] {
        Json arr = Json::array();
        for (const auto& name : builtin_names()) arr.push_back(example_json(builtin_example(name, a_.d), cfg_));
        emit(Json{{"examples", std::move(arr)}}, cfg_, out_);
        return kExitTrue;
      };
    });
  }

  std::pair<ComplexMatrix, IsotypicDecomposition> load_seed() {
    const Representation r = io::load_representation(a_.rep, cfg_.tol.tol);
    return {io::load_matrix(a_.matrix), isotypic_decompose(r, cfg_.tol.tol, cfg_.rng_seed)};
  }

  int finish_report(const ExtremalityReport& rep, bool witness_mode) {
    if (!a_.out_path.empty() && rep.witness) {
      write_json_file(a_.out_path, io::matrix_to_json(*rep.witness));
    }
    emit(io::report_to_json(rep), cfg_, out_);
    if (witness_mode) return rep.witness ? kExitTrue : kExitFalse;
    return rep.is_extremal ? kExitTrue : kExitFalse;
  }

  OptimizerConfig optimizer_config() const {
    OptimizerConfig oc;
    oc.tol = cfg_.tol;
    oc.seed = cfg_.rng_seed;
    oc.restarts = a_.restarts;
    return oc;
  }

  int optimize_povm() {
    const Representation r = io::load_representation(a_.reps.rep, cfg_.tol.tol);
    const ComplexMatrix w = io::load_matrix(a_.matrix);
    const ConvexSetSpec set = ConvexSetSpec::povm_seeds(isotypic_decompose(r, cfg_.tol.tol, cfg_.rng_seed));
    const OptimizeResult res = maximize_linear(w, set, optimizer_config());
    Json j = optimize_json(res);
    j["report"] = io::report_to_json(extremality(PovmSeed{res.maximizer, set.dec}, cfg_.tol));
    return finish_optimize(j);
  }

  int optimize_channel() {
    const auto rep = a_.reps.load(cfg_.tol.tol);
    if (!rep) throw ContractViolation("optimize channel needs --rep or --rep-out/--rep-in");
    std::size_t din = a_.dim_in;
    if (const auto d = a_.reps.dim_in(cfg_.tol.tol)) din = *d;
    if (din == 0 || rep->dim() % din != 0) {
      throw ContractViolation("optimize channel: --dim-in must divide the representation dimension");
    }
    const std::size_t dout = rep->dim() / din;
    const ComplexMatrix k = a_.rho.empty()
                                ? ComplexMatrix::Identity(static_cast<Eigen::Index>(din),
                                                          static_cast<Eigen::Index>(din))
                                : io::load_matrix(a_.rho);
    const IsotypicDecomposition dec = isotypic_decompose(*rep, cfg_.tol.tol, cfg_.rng_seed);
    const ConvexSetSpec set = ConvexSetSpec::covariant_channels(dec, din, dout, k);
    const OptimizeResult res = maximize_linear(io::load_matrix(a_.matrix), set, optimizer_config());
    Json j = optimize_json(res);
    j["dim_in"] = din;
    j["dim_out"] = dout;
    const ChoiOperator r(res.maximizer, din, dout);
    j["report"] = io::report_to_json(qo_extremality(covariant_from_commutant(r, dec), cfg_.tol));
    return finish_optimize(j);
  }

  static Json optimize_json(const OptimizeResult& res) {
    return Json{{"maximizer", io::matrix_to_json(res.maximizer)},
                {"value", res.value},
                {"iterations", res.iterations},
                {"converged", res.converged},
                {"restart", res.restart},
                {"polished", res.polished}};
  }

  int finish_optimize(const Json& j) {
    if (!a_.out_path.empty()) write_json_file(a_.out_path, j);
    emit(j, cfg_, out_);
    return kExitTrue;
  }

  struct Args {
    std::string rep;
    std::string matrix;
    std::string rho;
    std::string unitary;
    std::string out_path;
    std::string name;
    std::string check;
    RepArgs reps;
    std::optional<double> angle;
    std::optional<std::size_t> index;
    std::size_t d = 2;
    std::size_t dim_in = 0;
    std::size_t restarts = 4;
    bool flag = false;
  };

  std::ostream& out_;
  std::ostream& err_;
  RunConfig cfg_;
  std::string seed_text_;
  std::string output_ = "json";
  Args a_;
  std::function<int()> action_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Runner r(out, err);
  return r.run(args);
}

}  // namespace covx::cli
