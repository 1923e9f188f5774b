#include "ladderlab/cli.hpp"

#include <CLI11.hpp>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "ladderlab/bicoherent.hpp"
#include "ladderlab/dgha.hpp"
#include "ladderlab/errors.hpp"
#include "ladderlab/expr.hpp"
#include "ladderlab/graphene.hpp"
#include "ladderlab/ladder_engine.hpp"
#include "ladderlab/pseudoquon.hpp"

namespace ladderlab::cli {

namespace fs = std::filesystem;

namespace {

// ---- names -----------------------------------------------------------------

const char* model_name(Model m) {
  switch (m) {
    case Model::quon: return "quon";
    case Model::dgha: return "dgha";
    case Model::graphene: return "graphene";
    default: return "imported";
  }
}

Model parse_model(const std::string& s) {
  if (s == "quon") return Model::quon;
  if (s == "dgha") return Model::dgha;
  if (s == "graphene") return Model::graphene;
  if (s == "imported") return Model::imported;
  throw ConfigError("unknown model '" + s + "' (quon, dgha, graphene, imported)");
}

const char* format_name(Format f) {
  switch (f) {
    case Format::json: return "json";
    case Format::csv: return "csv";
    default: return "human";
  }
}

Format parse_format(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  if (s == "human") return Format::human;
  throw ConfigError("unknown format '" + s + "' (json, csv, human)");
}

const char* dressing_name(DressingKind k) {
  switch (k) {
    case DressingKind::identity: return "identity";
    case DressingKind::diagonal: return "diagonal";
    default: return "random";
  }
}

// ---- strict JSON access ----------------------------------------------------

void require_object(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void reject_unknown(const Json& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  require_object(j, where);
  for (const auto& item : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) throw ConfigError(where + ": unknown key '" + item.key() + "'");
  }
}

double get_number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(where + ": must be finite");
  return v;
}

long long get_integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return j.get<long long>();
}

std::string get_string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + ": expected a string");
  return j.get<std::string>();
}

Complex get_complex(const Json& j, const std::string& where) {
  Complex z;
  if (j.is_number()) {
    z = Complex(get_number(j, where), 0.0);
  } else if (j.is_string()) {
    z = parse_complex(j.get<std::string>());
  } else if (j.is_object()) {
    try {
      z = complex_from_json(j);
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  } else {
    throw ConfigError(where + ": expected a number, a string or {\"re\", \"im\"}");
  }
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw ConfigError(where + ": must be finite");
  }
  return z;
}

std::vector<Complex> get_complex_list(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(get_complex(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

fs::path existing_file(const std::string& text, const fs::path& base, const std::string& where) {
  fs::path p(text);
  if (p.is_relative()) p = base / p;
  if (!fs::is_regular_file(p)) throw ConfigError(where + ": file not found: " + p.string());
  return p;
}

// ---- report table ----------------------------------------------------------

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;

  Json to_json() const {
    Json j;
    j["columns"] = columns;
    Json r = Json::array();
    for (const auto& row : rows) r.push_back(Json(row));
    j["rows"] = std::move(r);
    return j;
  }
};

struct Check {
  std::string name;
  bool pass = false;
  bool counted = true;   // false: reported, only counted when requested by name
};

struct Outcome {
  Json results;
  Table table;
  std::vector<Check> checks;
  double cond_bound = 1.0;
};

std::string cell_text(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string csv_cell(const Json& v) {
  std::string s = cell_text(v);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

// ---- shared setup ----------------------------------------------------------

SpacePtr build_space(const Scenario& s) {
  switch (s.dressing) {
    case DressingKind::identity: return make_space(s.dim, IdentityDressing{});
    case DressingKind::diagonal: return make_space(s.dim, DiagonalDressing{s.dressing_scales});
    default: return make_space(s.dim, RandomDressing{s.seed, s.dressing_cond});
  }
}

// Portable uniform draws in [-1, 1): the bit pattern of mt19937_64 is fixed
// by the standard, the distributions are not.
double symmetric_unit(std::mt19937_64& gen) {
  return 2.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53 - 1.0;
}

Matrix seeded_noise(int dim, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Matrix m(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) {
      const double re = symmetric_unit(gen);
      m(i, j) = Complex(re, symmetric_unit(gen));
    }
  }
  return m;
}

struct Setup {
  SpacePtr space;
  std::optional<ladder::LadderTriple> triple;
  Vector phi0;
  Complex shift{0.0, 0.0};
  Json info;
  std::optional<quon::QuonParams> qparams;
  std::optional<quon::QuonPair> qpair;
  std::optional<dgha::DghaModel> dmodel;
  std::optional<dgha::DghaSystem> dsys;
};

quon::QuonParams quon_params(const Scenario& s) {
  if (s.quon_alpha.empty()) return quon::make_params(s.q, s.dim);
  if (static_cast<int>(s.quon_alpha.size()) != s.dim - 1) {
    throw ConfigError("quon.alpha: expected dim - 1 = " + std::to_string(s.dim - 1) + " entries");
  }
  std::vector<Complex> alpha{Complex(1.0, 0.0)};
  alpha.insert(alpha.end(), s.quon_alpha.begin(), s.quon_alpha.end());
  return quon::make_params(s.q, s.dim, std::move(alpha));
}

Setup setup_ladder(const Scenario& s, const std::string& command) {
  Setup st;
  switch (s.model) {
    case Model::quon: {
      st.space = build_space(s);
      st.qparams = quon_params(s);
      st.qpair = quon::build_quon_pair(*st.qparams, st.space);
      st.triple.emplace(quon::quon_triple(*st.qpair, s.q));
      st.phi0 = st.space->phi_basis(0);
      st.info["q"] = complex_to_json(s.q);
      break;
    }
    case Model::dgha: {
      st.space = build_space(s);
      st.dmodel = dgha::build_model(expr::parse(s.f), s.dim);
      if (st.dmodel->truncated) return st;
      st.dsys = dgha::build_dgha_triple(*st.dmodel, st.space, s.tol);
      st.triple.emplace(st.dsys->triple);
      st.phi0 = st.space->phi_basis(0);
      st.info["f"] = expr::print(st.dmodel->f);
      break;
    }
    case Model::imported: {
      Matrix h = read_matrix_file(s.H_path);
      const Matrix t = read_matrix_file(s.T_path);
      const Matrix sm = read_matrix_file(s.S_path);
      if (h.rows() != t.rows() || h.rows() != sm.rows()) {
        throw ConfigError("imported: H, T and S must have the same dimension");
      }
      const int dim = static_cast<int>(h.rows());
      if (dim < 4 || dim > 512) throw ConfigError("imported: dimension must lie in [4, 512]");
      if (s.perturbation != 0.0) h += s.perturbation * seeded_noise(dim, s.seed);
      st.space = std::make_shared<const DressedSpace>(Matrix::Identity(dim, dim),
                                                      Matrix::Identity(dim, dim), s.imported_cond,
                                                      s.imported_cond == 1.0);
      // Ground state: the eigenvector of H that T comes closest to annihilating.
      const Spectrum spec = eig(h);
      int best = 0;
      double best_ratio = HUGE_VAL;
      for (int k = 0; k < dim; ++k) {
        const Vector v = spec.vectors.col(k);
        const double ratio = (t * v).norm() / v.norm();
        if (ratio < best_ratio) {
          best_ratio = ratio;
          best = k;
        }
      }
      st.shift = spec.values[best];
      st.phi0 = spec.vectors.col(best);
      const Operator H0 = ladder::shift_to_zero(Operator(st.space, h), st.shift);
      st.triple.emplace(H0, Operator(st.space, t), Operator(st.space, sm), s.lambda);
      st.info["dim"] = dim;
      st.info["ground_shift"] = complex_to_json(st.shift);
      st.info["ground_T_ratio"] = best_ratio;
      st.info["perturbation"] = s.perturbation;
      break;
    }
    case Model::graphene:
      throw ConfigError(command + ": the graphene model has no ladder triple; use 'graphene' or 'spectrum'");
  }
  return st;
}

int default_n_max(const Scenario& s, const SpacePtr& space) {
  const int window = space->window();
  if (s.n_max < 0) return window;
  if (s.n_max > window) {
    throw ConfigError("n_max " + std::to_string(s.n_max) + " exceeds the window " +
                      std::to_string(window));
  }
  return s.n_max;
}

double family_biorth_tol(double cond) { return 1e-8 * cond; }

Json complex_cell_re(Complex z) { return z.real(); }
Json complex_cell_im(Complex z) { return z.imag(); }

// ---- commands --------------------------------------------------------------

Outcome truncated_outcome(const dgha::DghaModel& m) {
  Outcome o;
  o.results["model"] = dgha::to_json(m);
  o.checks.push_back({"levels_complete", false});
  o.table.columns = {"n", "eps"};
  for (std::size_t n = 0; n < m.eps.size(); ++n) o.table.rows.push_back({Json(n), Json(m.eps[n])});
  return o;
}

Outcome cmd_classify(const Scenario& s) {
  Setup st = setup_ladder(s, "classify");
  if (!st.triple) return truncated_outcome(*st.dmodel);
  Outcome o;
  o.cond_bound = st.space->cond_bound();
  const auto rep = ladder::classify(*st.triple, s.tol);
  o.results["model"] = st.info;
  o.results["classification"] = ladder::to_json(rep);
  o.table.columns = {"relation", "max_deviation", "threshold", "holds"};
  const auto row = [&](const std::string& name, const Comparison& c) {
    o.table.rows.push_back({Json(name), Json(c.max_deviation), Json(c.threshold), Json(c.equal)});
  };
  row("raising", rep.raising);
  row("lowering", rep.lowering);
  row("ts_commutes", rep.ts);
  row("adjoint_mirror", rep.adjoint_mirror);
  bool powers_ok = false;
  if (rep.in_R_lambda) {
    const int pn = std::min(st.space->window(), s.n_max < 0 ? 4 : s.n_max);
    const auto rows = ladder::verify_power_identities(*st.triple, pn, s.tol);
    o.results["power_identities"] = ladder::to_json(rows);
    powers_ok = std::all_of(rows.begin(), rows.end(), [](const ladder::PowerIdentityRow& r) {
      return r.raising_power.equal && r.adjoint_power.equal;
    });
    for (const auto& r : rows) {
      row("raising_power_" + std::to_string(r.n), r.raising_power);
      row("adjoint_power_" + std::to_string(r.n), r.adjoint_power);
    }
  }
  o.checks.push_back({"R_lambda", rep.in_R_lambda});
  o.checks.push_back({"strong", rep.in_R_lambda_strong, s.model != Model::imported});
  o.checks.push_back({"ts_commutes", rep.commutes_with_TS});
  o.checks.push_back({"adjoint_mirror", rep.mirror_agrees});
  o.checks.push_back({"power_identities", powers_ok});
  return o;
}

Outcome graphene_spectrum(const Scenario& s) {
  Outcome o;
  const graphene::GrapheneParams p{s.vf, s.xi, s.ncut};
  const auto es = graphene::eigenstructure(p);
  o.results["params"] = {{"vf", s.vf}, {"xi", s.xi}, {"ncut", s.ncut}};
  o.results["eigenstructure"] = graphene::to_json(es);
  o.table.columns = {"k", "eigenvalue", "mirror_partner"};
  const std::size_t m = es.spectrum.size();
  for (std::size_t k = 0; k < m; ++k) {
    o.table.rows.push_back({Json(k), Json(es.spectrum[k]), Json(-es.spectrum[m - 1 - k])});
  }
  o.checks.push_back({"eigenstructure", es.certified});
  return o;
}

Outcome cmd_spectrum(const Scenario& s) {
  if (s.model == Model::graphene) return graphene_spectrum(s);
  Setup st = setup_ladder(s, "spectrum");
  if (!st.triple) return truncated_outcome(*st.dmodel);
  Outcome o;
  o.cond_bound = st.space->cond_bound();
  o.results["model"] = st.info;
  const auto rep = ladder::classify(*st.triple, s.tol);
  o.results["classification"] = ladder::to_json(rep);
  const bool usable = rep.in_R_lambda && rep.commutes_with_TS;
  o.checks.push_back({"classified", usable});
  if (!usable) return o;

  const int n_max = default_n_max(s, st.space);
  auto pair = ladder::build_families(*st.triple, st.phi0, n_max, s.tol);
  std::optional<ladder::GammaReport> g;
  if (rep.in_R_lambda_strong) {
    g = ladder::gamma_ladder(pair, *st.triple, s.tol);
    pair = g->pair;
  }
  const Spectrum spec = eig(st.triple->H);
  const auto pairing = ladder::pair_spectra(pair.E, spec.values);
  const double thr = effective_threshold(s.tol, o.cond_bound, st.triple->H.norm());

  o.results["families"] = ladder::to_json(pair);
  if (g) o.results["gamma_ladder"] = ladder::to_json(*g);
  o.results["eig"] = complex_list_to_json(spec.values);
  o.results["pairing"] = {{"distance", real_list_to_json(pairing.distance)},
                          {"max_distance", pairing.max_distance},
                          {"threshold", thr}};

  o.table.columns = {"n", "E_re", "E_im", "mu_re", "mu_im", "gamma_re", "gamma_im",
                     "eig_re", "eig_im", "pair_distance"};
  for (int n = 0; n < pair.size(); ++n) {
    const Complex ev = spec.values[pairing.eig_index[n]];
    Json gre, gim;
    if (g && n < static_cast<int>(pair.gamma.size())) {
      gre = pair.gamma[n].real();
      gim = pair.gamma[n].imag();
    }
    o.table.rows.push_back({Json(n), complex_cell_re(pair.E[n]), complex_cell_im(pair.E[n]),
                            complex_cell_re(pair.mu[n]), complex_cell_im(pair.mu[n]), gre, gim,
                            complex_cell_re(ev), complex_cell_im(ev), Json(pairing.distance[n])});
  }
  o.checks.push_back({"families", pair.certified()});
  if (g) o.checks.push_back({"gamma", g->certified()});
  o.checks.push_back({"pairing", pairing.max_distance <= thr});
  return o;
}

Outcome cmd_bicoherent(const Scenario& s) {
  Setup st = setup_ladder(s, "bicoherent");
  if (!st.triple) return truncated_outcome(*st.dmodel);
  Outcome o;
  o.cond_bound = st.space->cond_bound();
  o.results["model"] = st.info;
  const auto rep = ladder::classify(*st.triple, s.tol);
  const bool usable = rep.in_R_lambda_strong && rep.commutes_with_TS;
  o.checks.push_back({"classified", usable});
  if (!usable) {
    o.results["classification"] = ladder::to_json(rep);
    return o;
  }
  const int window = st.space->window();
  if (s.n_terms < 8 || s.n_terms > window + 1) {
    throw ConfigError("bicoherent.n_terms must lie in [8, " + std::to_string(window + 1) + "]");
  }
  const int n_max = s.n_max < 0 ? s.n_terms - 1 : default_n_max(s, st.space);
  if (n_max + 1 < s.n_terms) throw ConfigError("bicoherent: n_max + 1 must be at least n_terms");
  const auto pair0 = ladder::build_families(*st.triple, st.phi0, n_max, s.tol);
  const auto g = ladder::gamma_ladder(pair0, *st.triple, s.tol);
  const auto rad = coherent::radius_for_pair(g.pair, *st.space);
  o.results["families_certified"] = g.pair.certified();
  o.results["gamma"] = complex_list_to_json(g.pair.gamma);
  o.results["radius"] = coherent::to_json(rad);
  o.results["n_terms"] = s.n_terms;

  o.table.columns = {"z_re", "z_im", "abs_z", "within_radius", "Gamma_re", "Gamma_im",
                     "Gamma_tail", "inner_re", "inner_im", "inner_threshold", "residual_T",
                     "predicted_T", "residual_Sdag", "predicted_Sdag", "ok"};
  Json states = Json::array();
  bool all_rows_ok = true;
  for (const Complex z : s.z_grid) {
    const bool within = std::abs(z) < rad.rho;
    std::vector<Json> row{Json(z.real()), Json(z.imag()), Json(std::abs(z)), Json(within)};
    if (!within) {
      row.resize(o.table.columns.size());
      Json flagged;
      flagged["z"] = complex_to_json(z);
      flagged["within_radius"] = false;
      states.push_back(std::move(flagged));
      o.table.rows.push_back(std::move(row));
      continue;
    }
    const auto state = coherent::build_states(g.pair, z, s.n_terms, rad.rho);
    const auto res = coherent::verify_eigen(state, g.pair, st.triple->T, st.triple->S);
    const bool ok = state.inner_ok && res.ok;
    Json sj = coherent::to_json(state, res);
    sj["within_radius"] = true;
    // Gamma(z) = 0 leaves no normalization; such z are flagged and skipped.
    sj["gamma_zero"] = !state.normalized;
    if (state.normalized) all_rows_ok = all_rows_ok && ok;
    states.push_back(std::move(sj));
    row.insert(row.end(), {Json(state.Gamma.value.real()), Json(state.Gamma.value.imag()),
                           Json(state.Gamma.tail_bound), Json(state.inner_product.real()),
                           Json(state.inner_product.imag()), Json(state.inner_threshold),
                           Json(res.residual_T), Json(res.predicted_T), Json(res.residual_Sdag),
                           Json(res.predicted_Sdag), state.normalized ? Json(ok) : Json()});
    o.table.rows.push_back(std::move(row));
  }
  o.results["states"] = std::move(states);
  o.checks.push_back({"families", g.pair.certified()});
  o.checks.push_back({"gamma", g.certified()});
  o.checks.push_back({"states", all_rows_ok});
  return o;
}

Outcome cmd_quon_osc(const Scenario& s) {
  if (s.model != Model::quon) throw ConfigError("quon-osc: requires the quon model");
  Outcome o;
  const SpacePtr space = build_space(s);
  o.cond_bound = space->cond_bound();
  const auto params = quon_params(s);
  const auto pair = quon::build_quon_pair(params, space);
  const auto osc = quon::build_oscillator(pair, {s.osc_alpha, s.osc_beta}, s.q, s.tol);
  const int window = space->window();
  const int n_max = default_n_max(s, space);
  const auto fam = quon::quon_families(params, pair, n_max, s.tol);
  const auto levels = quon::oscillator_levels(s.q, window);
  const Spectrum spec = eig(osc.H);
  const auto pairing = ladder::pair_spectra(levels, spec.values);
  const double thr = effective_threshold(s.tol, o.cond_bound, osc.H.norm());

  o.results["q"] = complex_to_json(s.q);
  o.results["oscillator"] = quon::to_json(osc);
  o.results["families"] = quon::to_json(fam);
  o.results["levels"] = complex_list_to_json(levels);
  o.results["pairing"] = {{"max_distance", pairing.max_distance}, {"threshold", thr}};

  o.table.columns = {"n", "level_re", "level_im", "eig_re", "eig_im", "distance"};
  for (int n = 0; n < window; ++n) {
    const Complex ev = spec.values[pairing.eig_index[n]];
    o.table.rows.push_back({Json(n), complex_cell_re(levels[n]), complex_cell_im(levels[n]),
                            complex_cell_re(ev), complex_cell_im(ev), Json(pairing.distance[n])});
  }
  const double half = std::numbers::sqrt2 / 2;
  const bool canonical_point = s.q == Complex(1.0, 0.0) &&
                               std::abs(s.osc_alpha - half) < 1e-15 &&
                               std::abs(s.osc_beta - half) < 1e-15;
  o.checks.push_back({"closed_form_H", osc.h_closed_form.equal});
  o.checks.push_back({"deformed_commutator", osc.xp_deformed.equal});
  o.checks.push_back({"levels", pairing.max_distance <= thr});
  o.checks.push_back({"families", fam.certified(family_biorth_tol(o.cond_bound))});
  o.checks.push_back({"canonical_commutator", osc.xp_canonical.equal, canonical_point});
  return o;
}

Outcome cmd_dgha(const Scenario& s) {
  if (s.model != Model::dgha) throw ConfigError("dgha: requires the dgha model");
  Setup st = setup_ladder(s, "dgha");
  if (!st.triple) return truncated_outcome(*st.dmodel);
  Outcome o;
  o.cond_bound = st.space->cond_bound();
  const auto& model = *st.dmodel;
  const auto& sys = *st.dsys;
  o.results["model"] = dgha::to_json(model);
  o.results["system"] = dgha::to_json(sys);
  const auto rep = ladder::classify(*st.triple, s.tol);
  o.results["classification"] = ladder::to_json(rep);
  const bool classified = rep.in_R_lambda && rep.in_R_lambda_strong && rep.commutes_with_TS;

  o.checks.push_back({"monotone", model.monotonicity.ok});
  o.checks.push_back({"relations", sys.relations_hold()});
  o.checks.push_back({"adjoint_f", sys.adjoint_f.equal});
  o.checks.push_back({"xi_eta_families", sys.certified(family_biorth_tol(o.cond_bound))});
  o.checks.push_back({"classified", classified});
  if (!classified) return o;

  const int n_max = default_n_max(s, st.space);
  const auto pair0 = ladder::build_families(*st.triple, st.phi0, n_max, s.tol);
  const auto g = ladder::gamma_ladder(pair0, *st.triple, s.tol);
  const auto& pair = g.pair;
  const auto lemma = ladder::verify_lemma1(pair, st.triple->T, st.triple->S, s.tol);
  o.results["families"] = ladder::to_json(pair);
  o.results["gamma_ladder"] = ladder::to_json(g);
  o.results["lemma1"] = ladder::to_json(lemma);
  o.results["constant_gap"] = g.constant_gap;

  double e_dev = 0.0, g_dev = 0.0;
  bool e_ok = true, g_ok = true;
  o.table.columns = {"n", "eps", "E_re", "E_im", "mu_re", "mu_im", "gamma_re", "gamma_im"};
  for (int n = 0; n < pair.size(); ++n) {
    const double de = std::abs(pair.E[n] - model.eps[n]);
    e_dev = std::max(e_dev, de);
    e_ok = e_ok && de <= effective_threshold(s.tol, o.cond_bound, model.eps[n]);
    Json gre, gim;
    if (n < static_cast<int>(pair.gamma.size())) {
      const double dg = std::abs(pair.gamma[n] - model.eps[n + 1]);
      g_dev = std::max(g_dev, dg);
      g_ok = g_ok && dg <= effective_threshold(s.tol, o.cond_bound, model.eps[n + 1]);
      gre = pair.gamma[n].real();
      gim = pair.gamma[n].imag();
    }
    o.table.rows.push_back({Json(n), Json(model.eps[n]), complex_cell_re(pair.E[n]),
                            complex_cell_im(pair.E[n]), complex_cell_re(pair.mu[n]),
                            complex_cell_im(pair.mu[n]), gre, gim});
  }
  o.results["E_vs_eps_max_dev"] = e_dev;
  o.results["gamma_vs_next_eps_max_dev"] = g_dev;
  o.checks.push_back({"families", pair.certified()});
  o.checks.push_back({"gamma", g.certified()});
  o.checks.push_back({"E_equals_eps", e_ok});
  o.checks.push_back({"gamma_equals_next_eps", g_ok});
  o.checks.push_back({"lemma1", std::all_of(lemma.begin(), lemma.end(),
                                            [](const ladder::Lemma1Row& r) { return r.ok; })});
  return o;
}

Outcome cmd_graphene(const Scenario& s) {
  if (s.model != Model::graphene) throw ConfigError("graphene: requires the graphene model");
  Outcome o;
  const graphene::GrapheneParams p{s.vf, s.xi, s.ncut};
  const auto hk = graphene::build_HK(p);
  const auto modes = graphene::check_modes(hk.modes);
  const auto es = graphene::eigenstructure(p);

  Eigen::SelfAdjointEigenSolver<Matrix> kp(graphene::HKprime(hk).mat(), Eigen::EigenvaluesOnly);
  if (kp.info() != Eigen::Success) throw NumericalError("graphene: eigensolver failed on H_K'");
  std::vector<double> kp_spec(kp.eigenvalues().data(), kp.eigenvalues().data() + kp.eigenvalues().size());
  std::sort(kp_spec.begin(), kp_spec.end());
  double kp_dev = 0.0;
  for (std::size_t k = 0; k < kp_spec.size(); ++k) kp_dev = std::max(kp_dev, std::abs(kp_spec[k] - es.spectrum[k]));

  Json sweep = Json::array();
  bool decreasing = true;
  double prev = HUGE_VAL;
  for (int n = std::max(2, s.ncut - 2); n <= s.ncut; ++n) {
    const double m = graphene::eigenstructure({s.vf, s.xi, n}).min_eigenvalue;
    decreasing = decreasing && m < prev;
    prev = m;
    sweep.push_back({{"ncut", n}, {"min_eigenvalue", m}});
  }

  const double hnorm = hk.H.norm();
  o.results["params"] = {{"vf", s.vf}, {"xi", s.xi}, {"ncut", s.ncut}, {"dim", 2 * s.ncut * s.ncut}};
  o.results["hermitian_dev"] = hk.hermitian_dev;
  o.results["modes"] = {{"a1_ccr", ladder::to_json(modes.a1_ccr)},
                        {"a2_ccr", ladder::to_json(modes.a2_ccr)},
                        {"a1_a2", ladder::to_json(modes.a1_a2)},
                        {"a1_a2dag", ladder::to_json(modes.a1_a2dag)}};
  o.results["a1_commutes"] = ladder::to_json(hk.a1_commutes);
  o.results["eigenstructure"] = graphene::to_json(es);
  o.results["kprime_spectrum_dev"] = kp_dev;
  o.results["min_eigenvalue_sweep"] = std::move(sweep);

  o.table.columns = {"n1", "n2", "sign", "E", "residual"};
  for (const auto& r : es.rows) {
    o.table.rows.push_back({Json(r.n1), Json(r.n2), Json(r.sign > 0 ? "+" : (r.sign < 0 ? "-" : "0")),
                            Json(r.E), Json(r.residual)});
  }
  o.checks.push_back({"hermitian", hk.hermitian_dev <= 1e-12 * std::max(1.0, hnorm)});
  o.checks.push_back({"modes", modes.a1_ccr.equal && modes.a2_ccr.equal && modes.a1_a2.equal &&
                                   modes.a1_a2dag.equal});
  o.checks.push_back({"a1_commutes", hk.a1_commutes.equal});
  o.checks.push_back({"eigenstructure", es.certified});
  o.checks.push_back({"kprime_spectrum", kp_dev <= 1e-9 * std::max(1.0, hnorm)});
  o.checks.push_back({"unbounded_below", decreasing});
  return o;
}

Outcome cmd_import_matrix(const Scenario& s, const std::vector<fs::path>& files,
                          const std::optional<fs::path>& export_to) {
  Outcome o;
  std::vector<fs::path> paths = files;
  if (paths.empty() && s.model == Model::imported) paths = {s.H_path, s.T_path, s.S_path};
  if (paths.empty()) throw ConfigError("import-matrix: give --matrix or an imported scenario");
  if (export_to && paths.size() != 1) throw ConfigError("import-matrix: --export takes exactly one --matrix");

  o.table.columns = {"file", "dim", "norm", "hermitian_dev", "cond"};
  Json mats = Json::array();
  bool finite = true;
  for (const auto& p : paths) {
    if (!fs::is_regular_file(p)) throw ConfigError("import-matrix: file not found: " + p.string());
    const Matrix m = read_matrix_file(p);
    const bool fin = m.allFinite();
    finite = finite && fin;
    const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    const double cond = fin ? condition_number(m) : HUGE_VAL;
    mats.push_back({{"file", p.filename().string()}, {"dim", m.rows()}, {"norm", m.norm()},
                    {"hermitian_dev", herm}, {"cond", real_to_json(cond)}, {"finite", fin}});
    o.table.rows.push_back({Json(p.filename().string()), Json(m.rows()), Json(m.norm()), Json(herm),
                            real_to_json(cond)});
    if (export_to) write_matrix_file(*export_to, m);
  }
  o.results["matrices"] = std::move(mats);
  if (export_to) o.results["exported"] = export_to->filename().string();
  o.checks.push_back({"finite", finite});
  return o;
}

// ---- output ----------------------------------------------------------------

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

std::string render(const Json& report, const Table& table, Format format) {
  std::ostringstream out;
  if (format == Format::json) {
    out << report.dump(2) << "\n";
  } else if (format == Format::csv) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
    out << "\n";
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_cell(row[c]);
      out << "\n";
    }
  } else {
    out << "command: " << report["command"].get<std::string>() << "\n";
    out << "status:  " << report["status"].get<std::string>() << "\n";
    out << "tol:     " << report["tolerance"]["tol"].dump() << " (cond_bound "
        << report["tolerance"]["cond_bound"].dump() << ")\n";
    for (const auto& c : report["checks"]) {
      out << "  " << (c["pass"].get<bool>() ? "ok   " : "FAIL ") << c["name"].get<std::string>()
          << (c["counted"].get<bool>() ? "" : " (informational)") << "\n";
    }
    if (!table.columns.empty()) {
      std::vector<std::size_t> width(table.columns.size());
      for (std::size_t c = 0; c < width.size(); ++c) width[c] = table.columns[c].size();
      for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) {
          width[c] = std::max(width[c], cell_text(row[c]).size());
        }
      }
      out << "\n";
      for (std::size_t c = 0; c < width.size(); ++c) {
        out << std::setw(static_cast<int>(width[c]) + 2) << table.columns[c];
      }
      out << "\n";
      for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) {
          out << std::setw(static_cast<int>(width[c]) + 2) << cell_text(row[c]);
        }
        out << "\n";
      }
    }
  }
  return out.str();
}

void emit(const std::string& text, const std::optional<fs::path>& path, std::ostream& out) {
  if (!path) {
    out << text;
    return;
  }
  std::ofstream f(*path, std::ios::binary);
  if (!f) throw ConfigError("cannot write report to " + path->string());
  f << text;
}

void finalize(Scenario& s) {
  if (s.dim < 4 || s.dim > 512) throw ConfigError("dim must lie in [4, 512]");
  if (!(s.tol > 0.0) || !std::isfinite(s.tol)) throw ConfigError("tol must be positive");
  if (s.dressing == DressingKind::random && (s.dressing_cond < 1.0 || s.dressing_cond > kMaxDressingCond)) {
    throw ConfigError("dressing.cond must lie in [1, 1e6]");
  }
  if (s.dressing == DressingKind::diagonal && static_cast<int>(s.dressing_scales.size()) != s.dim) {
    throw ConfigError("dressing.scales needs dim entries");
  }
  if (s.model == Model::graphene && (s.ncut < 2 || 2 * s.ncut * s.ncut > 512)) {
    throw ConfigError("graphene.ncut must lie in [2, 16]");
  }
  if (s.model == Model::imported && (s.H_path.empty() || s.T_path.empty() || s.S_path.empty())) {
    throw ConfigError("imported model needs H, T and S files");
  }
  if (s.imported_cond < 1.0) throw ConfigError("imported.cond_bound must be at least 1");
  for (const Complex z : s.z_grid) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw ConfigError("z grid must be finite");
  }
}

}  // namespace

// ---- scenario --------------------------------------------------------------

Complex parse_complex(const std::string& text) {
  std::string t;
  for (char c : text) {
    if (c != ' ' && c != '\t') t += c;
  }
  const auto fail = [&]() -> Complex { throw ConfigError("malformed complex number '" + text + "'"); };
  if (t.empty()) return fail();
  const auto number = [&](const std::string& part, double& v) {
    if (part.empty() || part == "+") {
      v = 1.0;
      return true;
    }
    if (part == "-") {
      v = -1.0;
      return true;
    }
    std::size_t used = 0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      return false;
    }
    return used == part.size() && std::isfinite(v);
  };
  if (t.back() != 'i') {
    double re = 0.0;
    if (t == "+" || t == "-" || !number(t, re)) return fail();
    return {re, 0.0};
  }
  const std::string body = t.substr(0, t.size() - 1);
  // Split at the last sign that is not the leading one or part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  double re = 0.0, im = 0.0;
  if (split == std::string::npos) {
    if (!number(body, im)) return fail();
  } else {
    const std::string rpart = body.substr(0, split);
    if (rpart.empty() || rpart == "+" || rpart == "-" || !number(rpart, re)) return fail();
    if (!number(body.substr(split), im)) return fail();
  }
  return {re, im};
}

Scenario parse_scenario(const Json& j, const fs::path& base_dir) {
  reject_unknown(j, {"model", "dim", "seed", "tol", "n_max", "dressing", "quon", "oscillator", "dgha",
                     "graphene", "imported", "bicoherent", "checks", "output"},
                 "scenario");
  Scenario s;
  if (j.contains("model")) s.model = parse_model(get_string(j["model"], "model"));
  if (j.contains("dim")) s.dim = static_cast<int>(get_integer(j["dim"], "dim"));
  if (j.contains("seed")) {
    const long long seed = get_integer(j["seed"], "seed");
    if (seed < 0) throw ConfigError("seed: must be nonnegative");
    s.seed = static_cast<std::uint64_t>(seed);
  }
  if (j.contains("tol")) s.tol = get_number(j["tol"], "tol");
  if (j.contains("n_max")) {
    s.n_max = static_cast<int>(get_integer(j["n_max"], "n_max"));
    if (s.n_max < 0) throw ConfigError("n_max: must be nonnegative");
  }
  if (j.contains("dressing")) {
    const Json& d = j["dressing"];
    reject_unknown(d, {"kind", "cond", "scales"}, "dressing");
    const std::string kind = d.contains("kind") ? get_string(d["kind"], "dressing.kind") : "identity";
    if (kind == "identity") {
      s.dressing = DressingKind::identity;
    } else if (kind == "random") {
      s.dressing = DressingKind::random;
      if (!d.contains("cond")) throw ConfigError("dressing: random needs cond");
      s.dressing_cond = get_number(d["cond"], "dressing.cond");
    } else if (kind == "diagonal") {
      s.dressing = DressingKind::diagonal;
      if (!d.contains("scales")) throw ConfigError("dressing: diagonal needs scales");
      s.dressing_scales = get_complex_list(d["scales"], "dressing.scales");
    } else {
      throw ConfigError("dressing.kind: unknown '" + kind + "' (identity, random, diagonal)");
    }
    if (kind != "random" && d.contains("cond")) throw ConfigError("dressing.cond only applies to random");
    if (kind != "diagonal" && d.contains("scales")) throw ConfigError("dressing.scales only applies to diagonal");
  }
  if (j.contains("quon")) {
    const Json& q = j["quon"];
    reject_unknown(q, {"q", "alpha"}, "quon");
    if (q.contains("q")) s.q = get_complex(q["q"], "quon.q");
    if (q.contains("alpha")) s.quon_alpha = get_complex_list(q["alpha"], "quon.alpha");
  }
  if (j.contains("oscillator")) {
    const Json& o = j["oscillator"];
    reject_unknown(o, {"alpha", "beta"}, "oscillator");
    if (o.contains("alpha")) s.osc_alpha = get_complex(o["alpha"], "oscillator.alpha");
    if (o.contains("beta")) s.osc_beta = get_complex(o["beta"], "oscillator.beta");
  }
  if (j.contains("dgha")) {
    const Json& d = j["dgha"];
    reject_unknown(d, {"f"}, "dgha");
    if (d.contains("f")) s.f = get_string(d["f"], "dgha.f");
    expr::parse(s.f);
  }
  if (j.contains("graphene")) {
    const Json& g = j["graphene"];
    reject_unknown(g, {"vf", "xi", "ncut"}, "graphene");
    if (g.contains("vf")) s.vf = get_number(g["vf"], "graphene.vf");
    if (g.contains("xi")) s.xi = get_number(g["xi"], "graphene.xi");
    if (g.contains("ncut")) s.ncut = static_cast<int>(get_integer(g["ncut"], "graphene.ncut"));
    if (!(s.vf > 0.0) || !(s.xi > 0.0)) throw ConfigError("graphene: vf and xi must be positive");
  }
  if (j.contains("imported")) {
    const Json& m = j["imported"];
    reject_unknown(m, {"H", "T", "S", "lambda", "perturbation", "cond_bound"}, "imported");
    if (m.contains("H")) s.H_path = existing_file(get_string(m["H"], "imported.H"), base_dir, "imported.H");
    if (m.contains("T")) s.T_path = existing_file(get_string(m["T"], "imported.T"), base_dir, "imported.T");
    if (m.contains("S")) s.S_path = existing_file(get_string(m["S"], "imported.S"), base_dir, "imported.S");
    if (m.contains("lambda")) s.lambda = get_complex(m["lambda"], "imported.lambda");
    if (m.contains("perturbation")) s.perturbation = get_number(m["perturbation"], "imported.perturbation");
    if (m.contains("cond_bound")) s.imported_cond = get_number(m["cond_bound"], "imported.cond_bound");
  }
  if (j.contains("bicoherent")) {
    const Json& b = j["bicoherent"];
    reject_unknown(b, {"z", "n_terms"}, "bicoherent");
    if (b.contains("z")) s.z_grid = get_complex_list(b["z"], "bicoherent.z");
    if (b.contains("n_terms")) s.n_terms = static_cast<int>(get_integer(b["n_terms"], "bicoherent.n_terms"));
  }
  if (j.contains("checks")) {
    if (!j["checks"].is_array()) throw ConfigError("checks: expected an array of names");
    for (std::size_t i = 0; i < j["checks"].size(); ++i) {
      s.checks.push_back(get_string(j["checks"][i], "checks[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("output")) {
    const Json& o = j["output"];
    reject_unknown(o, {"path", "format"}, "output");
    if (o.contains("path")) s.out = fs::path(get_string(o["path"], "output.path"));
    if (o.contains("format")) s.format = parse_format(get_string(o["format"], "output.format"));
  }
  return s;
}

Scenario load_scenario(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("scenario " + path.string() + ": " + e.what());
  }
  return parse_scenario(j, path.parent_path());
}

Json to_json(const Scenario& s) {
  Json j;
  j["model"] = model_name(s.model);
  j["dim"] = s.model == Model::graphene ? 2 * s.ncut * s.ncut : s.dim;
  j["seed"] = s.seed;
  j["tol"] = s.tol;
  if (s.n_max >= 0) j["n_max"] = s.n_max;
  Json d;
  d["kind"] = dressing_name(s.dressing);
  if (s.dressing == DressingKind::random) d["cond"] = s.dressing_cond;
  if (s.dressing == DressingKind::diagonal) d["scales"] = complex_list_to_json(s.dressing_scales);
  j["dressing"] = std::move(d);
  switch (s.model) {
    case Model::quon: {
      Json q;
      q["q"] = complex_to_json(s.q);
      if (!s.quon_alpha.empty()) q["alpha"] = complex_list_to_json(s.quon_alpha);
      j["quon"] = std::move(q);
      j["oscillator"] = {{"alpha", complex_to_json(s.osc_alpha)}, {"beta", complex_to_json(s.osc_beta)}};
      break;
    }
    case Model::dgha:
      j["dgha"] = {{"f", s.f}};
      break;
    case Model::graphene:
      j["graphene"] = {{"vf", s.vf}, {"xi", s.xi}, {"ncut", s.ncut}};
      break;
    case Model::imported:
      // File names only, so reports do not depend on where the tree lives.
      j["imported"] = {{"H", s.H_path.filename().string()},
                       {"T", s.T_path.filename().string()},
                       {"S", s.S_path.filename().string()},
                       {"lambda", complex_to_json(s.lambda)},
                       {"perturbation", s.perturbation},
                       {"cond_bound", s.imported_cond}};
      break;
  }
  j["bicoherent"] = {{"z", complex_list_to_json(s.z_grid)}, {"n_terms", s.n_terms}};
  j["checks"] = s.checks;
  j["format"] = format_name(s.format);
  return j;
}

// ---- entry point -----------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ladder-operator verification toolkit", "ladderlab"};
  app.require_subcommand(1);

  std::optional<std::string> scenario_path, out_path, format, model, q, f, matrix_export;
  std::optional<double> tol, cond, vf, xi, perturb;
  std::optional<int> dim, ncut, n_terms, n_max;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> z_list, matrices;
  bool no_timestamp = false;

  app.add_option("--scenario", scenario_path, "scenario JSON file");
  app.add_option("--tol", tol, "base tolerance");
  app.add_option("--dim", dim, "truncation dimension, 4..512");
  app.add_option("--seed", seed, "seed for random dressings and perturbations");
  app.add_option("--out", out_path, "write the report here instead of stdout");
  app.add_option("--format", format, "json | csv | human");
  app.add_flag("--no-timestamp", no_timestamp, "omit generated_at from the report");
  app.add_option("--model", model, "quon | dgha | graphene | imported");
  app.add_option("--q", q, "quon deformation, e.g. 0.5 or 0.7+0.6i");
  app.add_option("--cond", cond, "random dressing with this condition number");
  app.add_option("--f", f, "DGHA level map f(x)");
  app.add_option("--ncut", ncut, "graphene per-mode cutoff");
  app.add_option("--vf", vf, "graphene Fermi velocity");
  app.add_option("--xi", xi, "graphene magnetic length");
  app.add_option("--z", z_list, "bi-coherent z values")->delimiter(',')->allow_extra_args(false);
  app.add_option("--n-terms", n_terms, "bi-coherent series length");
  app.add_option("--n-max", n_max, "highest family index");
  app.add_option("--perturb", perturb, "imported model: amplitude of a seeded random term added to H");
  app.add_option("--matrix", matrices, "import-matrix: matrix JSON file (repeatable)");
  app.add_option("--export", matrix_export, "import-matrix: write the canonical form here");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"classify", "class membership and power identities"},
      {"spectrum", "recursion spectrum against the eigensolver"},
      {"bicoherent", "bi-coherent states on a z grid"},
      {"quon-osc", "deformed oscillator built from pseudo-quons"},
      {"dgha", "deformed generalized Heisenberg algebra end to end"},
      {"graphene", "Dirac-type block Hamiltonian"},
      {"import-matrix", "validate and re-export matrix files"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return static_cast<int>(ExitCode::config);
  }
  const std::string command = app.get_subcommands().front()->get_name();

  Scenario s;
  std::optional<fs::path> report_path;
  Format fmt = Format::json;
  const auto error_report = [&](const std::string& status, const std::string& what) {
    err << "ladderlab " << command << ": " << what << "\n";
    if (fmt != Format::json) return;
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["status"] = status;
    j["error"] = what;
    try {
      emit(j.dump(2) + "\n", report_path, out);
    } catch (const ConfigError&) {
      out << j.dump(2) << "\n";
    }
  };

  try {
    if (format) fmt = parse_format(*format);
    if (out_path) report_path = fs::path(*out_path);
    if (scenario_path) s = load_scenario(*scenario_path);
    if (!format) fmt = s.format;
    if (!out_path) report_path = s.out;
    // Command defaults for the model when nothing else says otherwise.
    if (!scenario_path && !model) {
      if (command == "dgha") s.model = Model::dgha;
      if (command == "graphene") s.model = Model::graphene;
    }
    if (model) s.model = parse_model(*model);
    if (tol) s.tol = *tol;
    if (dim) s.dim = *dim;
    if (seed) s.seed = *seed;
    if (q) s.q = parse_complex(*q);
    if (cond) {
      s.dressing = DressingKind::random;
      s.dressing_cond = *cond;
    }
    if (f) {
      expr::parse(*f);
      s.f = *f;
    }
    if (ncut) s.ncut = *ncut;
    if (vf) s.vf = *vf;
    if (xi) s.xi = *xi;
    if (!z_list.empty()) {
      s.z_grid.clear();
      for (const auto& z : z_list) s.z_grid.push_back(parse_complex(z));
    }
    if (n_terms) s.n_terms = *n_terms;
    if (n_max) {
      if (*n_max < 0) throw ConfigError("--n-max must be nonnegative");
      s.n_max = *n_max;
    }
    if (perturb) s.perturbation = *perturb;
    s.format = fmt;
    if (command != "import-matrix") finalize(s);

    Outcome o;
    if (command == "classify") {
      o = cmd_classify(s);
    } else if (command == "spectrum") {
      o = cmd_spectrum(s);
    } else if (command == "bicoherent") {
      o = cmd_bicoherent(s);
    } else if (command == "quon-osc") {
      o = cmd_quon_osc(s);
    } else if (command == "dgha") {
      o = cmd_dgha(s);
    } else if (command == "graphene") {
      o = cmd_graphene(s);
    } else {
      std::vector<fs::path> files(matrices.begin(), matrices.end());
      std::optional<fs::path> exp;
      if (matrix_export) exp = fs::path(*matrix_export);
      o = cmd_import_matrix(s, files, exp);
    }

    for (const auto& name : s.checks) {
      const bool known = std::any_of(o.checks.begin(), o.checks.end(),
                                     [&](const Check& c) { return c.name == name; });
      if (!known) throw ConfigError("checks: '" + name + "' is not produced by " + command);
    }
    bool pass = true;
    Json checks = Json::array();
    for (auto& c : o.checks) {
      if (!s.checks.empty()) {
        c.counted = std::find(s.checks.begin(), s.checks.end(), c.name) != s.checks.end();
      }
      if (c.counted) pass = pass && c.pass;
      checks.push_back({{"name", c.name}, {"pass", c.pass}, {"counted", c.counted}});
    }

    Json report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = command;
    if (!no_timestamp) report["generated_at"] = utc_now();
    report["scenario"] = to_json(s);
    report["tolerance"] = {{"tol", s.tol},
                           {"cond_bound", o.cond_bound},
                           {"rule", "tol * cond_bound * max(1, operator scale)"}};
    report["status"] = pass ? "pass" : "fail";
    report["checks"] = std::move(checks);
    report["results"] = std::move(o.results);
    report["table"] = o.table.to_json();
    emit(render(report, o.table, fmt), report_path, out);
    return static_cast<int>(pass ? ExitCode::pass : ExitCode::failed);
  } catch (const NumericalError& e) {
    error_report("numerical_failure", e.what());
    return static_cast<int>(ExitCode::numerical);
  } catch (const Error& e) {
    error_report("config_error", e.what());
    return static_cast<int>(ExitCode::config);
  } catch (const nlohmann::json::exception& e) {
    error_report("config_error", e.what());
    return static_cast<int>(ExitCode::config);
  }
}

}  // namespace ladderlab::cli
