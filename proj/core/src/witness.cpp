#include "incompat/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "incompat/parallel.hpp"
#include "incompat/sampling.hpp"

namespace incompat {

// ----------------------------------------------------------- evaluations --

double signed_gap(const WitnessReport& r) {
  const double gmax = *std::max_element(r.g_as.begin(), r.g_as.end());
  const double fmin = *std::min_element(r.F_as.begin(), r.F_as.end());
  return gmax - fmin;
}

double assemblage_value(const std::function<double(const DensityMatrix&)>& g,
                        const StateAssemblage& s, int x) {
  if (x < 0 || x >= s.settings()) throw ShapeError("assemblage_value: setting out of range");
  double total = 0.0;
  for (int a = 0; a < s.outcomes(x); ++a) {
    const double w = s.at(x, a).weight();
    if (w < tol::weight_floor) continue; // zero-probability branch carries no information
    total += w * g(s.at(x, a).normalized());
  }
  return total;
}

double roof_value(const WitnessFunctional& f, const StateAssemblage& s, int x) {
  return assemblage_value(f.roof, s, x);
}

WitnessReport violation(const WitnessFunctional& f, const StateAssemblage& s) {
  if (!f.roof_exact)
    throw SoundnessError("violation: functional '" + f.name +
                         "' has no exact roof; a sampled roof cannot certify anything");
  if (f.dim != s.dim())
    throw ShapeError("violation: functional built for dimension " + std::to_string(f.dim) +
                     ", assemblage has " + std::to_string(s.dim()));
  WitnessReport r;
  r.functional = f.name;
  for (int x = 0; x < s.settings(); ++x) {
    r.g_as.push_back(assemblage_value(f.g, s, x));
    r.F_as.push_back(roof_value(f, s, x));
  }
  r.x_star = static_cast<int>(std::max_element(r.g_as.begin(), r.g_as.end()) - r.g_as.begin());
  r.x_lower = static_cast<int>(std::min_element(r.F_as.begin(), r.F_as.end()) - r.F_as.begin());
  r.violation = std::max(r.g_as[r.x_star] - r.F_as[r.x_lower], 0.0);
  return r;
}

// ------------------------------------------------------------- SEO / embed --

MeasurementAssemblage seo(const StateAssemblage& s, double rank_tol) {
  const ComplexMatrix inv = psd_inv_sqrt(HermitianMatrix(s.marginal()), rank_tol);
  std::vector<std::vector<Effect>> effects;
  for (int x = 0; x < s.settings(); ++x) {
    std::vector<Effect> row;
    for (int a = 0; a < s.outcomes(x); ++a) row.emplace_back(inv * s.at(x, a).mat() * inv);
    effects.push_back(std::move(row));
  }
  return MeasurementAssemblage(std::move(effects), tol::seo_completeness);
}

StateAssemblage embed_measurement(const MeasurementAssemblage& m, const DensityMatrix& rho_b) {
  if (m.dim() != rho_b.dim()) throw ShapeError("embed_measurement: dimension mismatch");
  const EigenSystem es = hermitian_eig(rho_b.hermitian());
  if (es.values.front() <= tol::rank_default)
    throw RankError("embed_measurement: state must be full rank to invert the embedding");
  const int d = m.dim();
  ComplexMatrix sq(d, d);
  for (int k = 0; k < d; ++k) {
    const double s = std::sqrt(es.values[k]);
    for (int i = 0; i < d; ++i) {
      const cplx uik = es.vectors(i, k) * s;
      for (int j = 0; j < d; ++j) sq(i, j) += uik * std::conj(es.vectors(j, k));
    }
  }
  std::vector<std::vector<SubnormalizedState>> elements;
  for (int x = 0; x < m.settings(); ++x) {
    std::vector<SubnormalizedState> row;
    for (int a = 0; a < m.outcomes(x); ++a) row.emplace_back(sq * m.at(x, a).mat() * sq);
    elements.push_back(std::move(row));
  }
  return StateAssemblage(std::move(elements));
}

// ---------------------------------------------------------- Nelder-Mead ----

namespace {

struct NmPoint {
  std::vector<double> x;
  double f;
};

// textbook Nelder-Mead (reflect 1, expand 2, contract 1/2, shrink 1/2);
// deterministic given the starting point
NmPoint nelder_mead_min(const std::function<double(const std::vector<double>&)>& fn,
                        const std::vector<double>& x0, double step, int max_iter, double tol) {
  const size_t n = x0.size();
  std::vector<NmPoint> simplex;
  simplex.push_back({x0, fn(x0)});
  for (size_t i = 0; i < n; ++i) {
    std::vector<double> x = x0;
    x[i] += step;
    simplex.push_back({x, fn(x)});
  }

  auto by_f = [](const NmPoint& a, const NmPoint& b) { return a.f < b.f; };
  for (int it = 0; it < max_iter; ++it) {
    std::stable_sort(simplex.begin(), simplex.end(), by_f);
    if (simplex.back().f - simplex.front().f < tol) break;

    std::vector<double> centroid(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) centroid[j] += simplex[i].x[j];
    }
    for (auto& c : centroid) c /= static_cast<double>(n);

    auto blend = [&](double t) {
      std::vector<double> x(n);
      for (size_t j = 0; j < n; ++j) x[j] = centroid[j] + t * (simplex.back().x[j] - centroid[j]);
      return x;
    };

    const std::vector<double> xr = blend(-1.0);
    const double fr = fn(xr);
    if (fr < simplex.front().f) {
      const std::vector<double> xe = blend(-2.0);
      const double fe = fn(xe);
      simplex.back() = fe < fr ? NmPoint{xe, fe} : NmPoint{xr, fr};
      continue;
    }
    if (fr < simplex[n - 1].f) {
      simplex.back() = {xr, fr};
      continue;
    }
    const bool outside = fr < simplex.back().f;
    const std::vector<double> xc = blend(outside ? -0.5 : 0.5);
    const double fc = fn(xc);
    if (fc < std::min(fr, simplex.back().f)) {
      simplex.back() = {xc, fc};
      continue;
    }
    for (size_t i = 1; i <= n; ++i) { // shrink toward the best vertex
      for (size_t j = 0; j < n; ++j)
        simplex[i].x[j] = 0.5 * (simplex[i].x[j] + simplex.front().x[j]);
      simplex[i].f = fn(simplex[i].x);
    }
  }
  std::stable_sort(simplex.begin(), simplex.end(), by_f);
  return simplex.front();
}

} // namespace

// ------------------------------------------------- measurement monotone ----

void OptimizerConfig::validate() const {
  if (grid_resolution < 1) throw ValidationError("OptimizerConfig: grid_resolution < 1");
  if (num_candidates < 1) throw ValidationError("OptimizerConfig: num_candidates < 1");
  if (full_rank_floor <= tol::rank_default)
    throw ValidationError("OptimizerConfig: full_rank_floor must exceed the rank cutoff");
  if (nm_max_iter < 0 || nm_step <= 0.0 || nm_tol <= 0.0)
    throw ValidationError("OptimizerConfig: bad Nelder-Mead parameters");
}

namespace {

// qubit parameter vector = Bloch components, radius clamped to 1 - 2*floor
DensityMatrix bloch_state(const std::vector<double>& r, double rmax) {
  double len = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
  const double scale = len > rmax ? rmax / len : 1.0;
  ComplexMatrix m(2, 2);
  const double x = r[0] * scale, y = r[1] * scale, z = r[2] * scale;
  m(0, 0) = 0.5 * (1.0 + z);
  m(1, 1) = 0.5 * (1.0 - z);
  m(0, 1) = 0.5 * cplx(x, -y);
  m(1, 0) = 0.5 * cplx(x, y);
  return DensityMatrix(m);
}

// general-d parameter vector = d^2 reals -> hermitian A -> exp(A)/Tr exp(A),
// floored by mixing in a sliver of the maximally mixed state
DensityMatrix exp_state(const std::vector<double>& p, int d, double floor_eps) {
  ComplexMatrix a(d, d);
  size_t idx = 0;
  auto clamp3 = [](double v) { return std::max(-3.0, std::min(3.0, v)); };
  for (int i = 0; i < d; ++i) a(i, i) = clamp3(p[idx++]);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const cplx z(clamp3(p[idx]), clamp3(p[idx + 1]));
      idx += 2;
      a(i, j) = z;
      a(j, i) = std::conj(z);
    }
  EigenSystem es = hermitian_eig(HermitianMatrix(a));
  std::vector<double> w(es.values.size());
  double tr = 0.0;
  for (size_t k = 0; k < w.size(); ++k) tr += (w[k] = std::exp(es.values[k]));
  ComplexMatrix rho(d, d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i) {
      const cplx uik = es.vectors(i, k) * (w[k] / tr);
      for (int j = 0; j < d; ++j) rho(i, j) += uik * std::conj(es.vectors(j, k));
    }
  const double kappa = d * floor_eps;
  ComplexMatrix mixed = (1.0 - kappa) * rho + (kappa / d) * ComplexMatrix::identity(d);
  return DensityMatrix(mixed);
}

} // namespace

IncompatibilityResult measurement_incompatibility(const WitnessFunctional& f,
                                                  const MeasurementAssemblage& m,
                                                  const OptimizerConfig& cfg) {
  cfg.validate();
  if (f.dim != m.dim())
    throw ShapeError("measurement_incompatibility: functional/assemblage dimension mismatch");
  const int d = m.dim();

  const bool qubit = (d == 2);
  const double rmax = 1.0 - 2.0 * cfg.full_rank_floor;
  auto to_state = [&](const std::vector<double>& p) {
    return qubit ? bloch_state(p, rmax) : exp_state(p, d, cfg.full_rank_floor);
  };
  auto objective = [&](const std::vector<double>& p) {
    return violation(f, embed_measurement(m, to_state(p))).violation;
  };

  // stage 1: deterministic candidate sweep, maximally mixed always included
  std::vector<std::vector<double>> candidates;
  if (qubit) {
    candidates.push_back({0.0, 0.0, 0.0});
    const int n = cfg.grid_resolution;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          auto coord = [&](int t) { return n == 1 ? 0.0 : -rmax + 2.0 * rmax * t / (n - 1); };
          std::vector<double> r = {coord(i), coord(j), coord(k)};
          if (r[0] * r[0] + r[1] * r[1] + r[2] * r[2] <= rmax * rmax) candidates.push_back(r);
        }
  } else {
    candidates.emplace_back(d * d, 0.0); // A = 0 is the maximally mixed state
    WeylSequence seq(d * d, cfg.seed);
    for (int c = 0; c < cfg.num_candidates; ++c) {
      std::vector<double> u = seq.next();
      for (auto& v : u) v = 4.0 * v - 2.0;
      candidates.push_back(std::move(u));
    }
  }

  // candidates are independent; the argmax reduction runs over the stored
  // values in enumeration order, so worker count cannot change the result
  std::vector<double> values(candidates.size());
  parallel_for(static_cast<int>(candidates.size()),
               [&](int i) { values[i] = objective(candidates[i]); });
  size_t best_i = 0;
  for (size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best_i]) best_i = i;
  std::vector<double> best_p = candidates[best_i];
  double best_v = values[best_i];

  // stage 2: local refinement (maximize = minimize the negation)
  if (cfg.nm_max_iter > 0) {
    NmPoint refined = nelder_mead_min([&](const std::vector<double>& p) { return -objective(p); },
                                      best_p, cfg.nm_step, cfg.nm_max_iter, cfg.nm_tol);
    if (-refined.f > best_v) {
      best_v = -refined.f;
      best_p = refined.x;
    }
  }

  DensityMatrix best_state = to_state(best_p);
  WitnessReport report = violation(f, embed_measurement(m, best_state));
  return IncompatibilityResult{report.violation, best_state, report};
}

// -------------------------------------------------- instrument monotone ----

namespace {

std::vector<DensityMatrix> default_input_states(int din, const OptimizerConfig& cfg) {
  std::vector<DensityMatrix> out;
  if (din == 2) {
    // Bloch-sphere pure grid with both poles exact
    out.push_back(DensityMatrix::pure({1.0, 0.0}));
    out.push_back(DensityMatrix::pure({0.0, 1.0}));
    const int n_theta = 5, n_phi = 8;
    for (int i = 1; i < n_theta; ++i)
      for (int j = 0; j < n_phi; ++j) {
        const double th = M_PI * i / n_theta;
        const double ph = 2.0 * M_PI * j / n_phi;
        out.push_back(DensityMatrix::pure(
            {std::cos(th / 2.0), std::exp(cplx(0.0, ph)) * std::sin(th / 2.0)}));
      }
    return out;
  }
  std::mt19937_64 rng(cfg.seed);
  for (int i = 0; i < din; ++i) {
    std::vector<cplx> e(din, 0.0);
    e[i] = 1.0;
    out.push_back(DensityMatrix::pure(e));
  }
  for (int c = 0; c < 48; ++c) out.push_back(random_pure(din, rng));
  return out;
}

MeasurementAssemblage fourier_pair_assemblage(int d) {
  // computational + Fourier bases as a two-setting projective assemblage
  std::vector<std::vector<Effect>> effects(2);
  for (int a = 0; a < d; ++a) effects[0].emplace_back(computational_projector(d, a));
  for (int a = 0; a < d; ++a) {
    ComplexMatrix p(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        p(i, j) = std::exp(cplx(0.0, 2.0 * M_PI * a * (i - j) / d)) / static_cast<double>(d);
    effects[1].emplace_back(p);
  }
  return MeasurementAssemblage(std::move(effects));
}

} // namespace

InstrumentWitnessResult instrument_incompatibility(const WitnessFunctional& f,
                                                   const std::vector<ComplexMatrix>& channel_kraus,
                                                   const InstrumentSearchSpace& space,
                                                   const OptimizerConfig& cfg) {
  cfg.validate();
  const MinimalDilation dil = minimal_dilation(channel_kraus);
  const int r = dil.isometry.dim_anc();
  const int dout = dil.isometry.dim_out();
  const int din = dil.isometry.dim_in();
  if (f.dim != dout)
    throw ShapeError("instrument_incompatibility: functional dimension != channel output");

  std::vector<MeasurementAssemblage> family;
  for (const auto& m : space.ancilla_measurements)
    if (m.dim() == r) family.push_back(m);
  if (family.empty() && space.ancilla_measurements.empty()) {
    if (r == 2) {
      family.push_back(noisy_pauli_assemblage(0.0));
      family.push_back(noisy_pauli_assemblage(0.25));
    } else if (r > 2) {
      family.push_back(fourier_pair_assemblage(r));
    }
  }

  InstrumentWitnessResult result; // value 0: a 1-dim ancilla steers nothing
  if (family.empty()) return result;

  const std::vector<DensityMatrix> inputs =
      space.input_states.empty() ? default_input_states(din, cfg) : space.input_states;

  for (size_t mi = 0; mi < family.size(); ++mi) {
    for (size_t si = 0; si < inputs.size(); ++si) {
      const ComplexMatrix big =
          dil.isometry.mat() * inputs[si].mat() * adjoint(dil.isometry.mat());
      const StateAssemblage sigma =
          conditional_assemblage(DensityMatrix(big), family[mi], r, dout);
      double v = violation(f, sigma).violation;
      bool via_seo = false;
      try {
        const MeasurementAssemblage b = seo(sigma);
        const IncompatibilityResult inner = measurement_incompatibility(f, b, cfg);
        if (inner.value > v) {
          v = inner.value;
          via_seo = true;
        }
      } catch (const RankError&) {
        // rank-deficient marginal: the direct value stands
      } catch (const ValidationError&) {
        // marginal too ill-conditioned for a clean SEO; keep the direct value
      }
      if (v > result.value) {
        result.value = v;
        result.best_measurement = static_cast<int>(mi);
        result.best_input = static_cast<int>(si);
        result.via_seo = via_seo;
      }
    }
  }
  return result;
}

// ------------------------------------------------------------- wirings ----

Wiring Wiring::identity(int settings, const std::vector<int>& outcomes) {
  if (settings <= 0 || static_cast<int>(outcomes.size()) != settings)
    throw ShapeError("Wiring::identity: bad outcome list");
  Wiring w;
  w.setting_map.assign(settings, std::vector<double>(settings, 0.0));
  w.outcome_map.resize(settings);
  for (int xp = 0; xp < settings; ++xp) {
    w.setting_map[xp][xp] = 1.0;
    w.outcome_map[xp].resize(settings);
    for (int x = 0; x < settings; ++x) {
      w.outcome_map[xp][x].resize(outcomes[x]);
      for (int a = 0; a < outcomes[x]; ++a) {
        std::vector<double> dist(outcomes[xp], 0.0);
        dist[std::min(a, outcomes[xp] - 1)] = 1.0;
        w.outcome_map[xp][x][a] = std::move(dist);
      }
    }
  }
  return w;
}

void Wiring::validate(int settings, const std::vector<int>& outcomes) const {
  if (setting_map.empty()) throw ShapeError("Wiring: no output settings");
  if (outcome_map.size() != setting_map.size())
    throw ShapeError("Wiring: setting/outcome map size mismatch");
  for (size_t xp = 0; xp < setting_map.size(); ++xp) {
    if (static_cast<int>(setting_map[xp].size()) != settings)
      throw ShapeError("Wiring: setting row has wrong width");
    double total = 0.0;
    for (double p : setting_map[xp]) {
      if (p < -1e-12) throw ValidationError("Wiring: negative setting probability");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw ValidationError("Wiring: setting distribution sums to " + std::to_string(total));

    if (static_cast<int>(outcome_map[xp].size()) != settings)
      throw ShapeError("Wiring: outcome map has wrong setting count");
    size_t n_out = 0;
    for (int x = 0; x < settings; ++x) {
      if (static_cast<int>(outcome_map[xp][x].size()) != outcomes[x])
        throw ShapeError("Wiring: outcome map row mismatch");
      for (int a = 0; a < outcomes[x]; ++a) {
        const auto& dist = outcome_map[xp][x][a];
        if (n_out == 0) n_out = dist.size();
        if (dist.size() != n_out || dist.empty())
          throw ShapeError("Wiring: inconsistent output outcome count");
        double s = 0.0;
        for (double p : dist) {
          if (p < -1e-12) throw ValidationError("Wiring: negative outcome probability");
          s += p;
        }
        if (std::abs(s - 1.0) > 1e-9)
          throw ValidationError("Wiring: outcome distribution sums to " + std::to_string(s));
      }
    }
  }
}

namespace {

template <typename Element, typename Assemblage, typename Wrap>
std::vector<std::vector<Element>> wire_elements(const Assemblage& in, const Wiring& w,
                                                const Wrap& wrap) {
  std::vector<std::vector<Element>> out;
  const int dim = in.dim();
  for (size_t xp = 0; xp < w.setting_map.size(); ++xp) {
    const size_t n_out = w.outcome_map[xp][0][0].size();
    std::vector<ComplexMatrix> acc(n_out, ComplexMatrix(dim, dim));
    for (int x = 0; x < in.settings(); ++x) {
      const double px = w.setting_map[xp][x];
      if (px == 0.0) continue;
      for (int a = 0; a < in.outcomes(x); ++a)
        for (size_t ap = 0; ap < n_out; ++ap) {
          const double q = w.outcome_map[xp][x][a][ap];
          if (q == 0.0) continue;
          acc[ap] = acc[ap] + (px * q) * in.at(x, a).mat();
        }
    }
    std::vector<Element> row;
    for (auto& m : acc) row.push_back(wrap(m));
    out.push_back(std::move(row));
  }
  return out;
}

} // namespace

StateAssemblage apply_wiring(const StateAssemblage& s, const Wiring& w) {
  std::vector<int> outcomes;
  for (int x = 0; x < s.settings(); ++x) outcomes.push_back(s.outcomes(x));
  w.validate(s.settings(), outcomes);
  return StateAssemblage(wire_elements<SubnormalizedState>(
      s, w, [](const ComplexMatrix& m) { return SubnormalizedState(m); }));
}

MeasurementAssemblage apply_wiring(const MeasurementAssemblage& m, const Wiring& w) {
  std::vector<int> outcomes;
  for (int x = 0; x < m.settings(); ++x) outcomes.push_back(m.outcomes(x));
  w.validate(m.settings(), outcomes);
  return MeasurementAssemblage(
      wire_elements<Effect>(m, w, [](const ComplexMatrix& e) { return Effect(e); }));
}

double pure_state_bound(const WitnessFunctional& f, const DensityMatrix& rho_b) {
  if (f.dim != rho_b.dim()) throw ShapeError("pure_state_bound: dimension mismatch");
  return f.roof(rho_b) - f.g(rho_b);
}

} // namespace incompat
