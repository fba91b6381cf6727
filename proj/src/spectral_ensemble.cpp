#include "wkt/spectral_ensemble.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wkt {

namespace {
constexpr double kTwoPi = 6.283185307179586476925;
using cplx = std::complex<double>;
}  // namespace

std::size_t BetaTorus::n_modes() const {
  std::size_t n = 1;
  for (int i = 0; i < d; ++i) n *= static_cast<std::size_t>(per_axis());
  return n;
}

std::vector<std::int64_t> BetaTorus::mode_numerator(std::size_t idx) const {
  std::vector<std::int64_t> num(d);
  const int g = per_axis();
  for (int a = d - 1; a >= 0; --a) {
    num[a] = static_cast<std::int64_t>(idx % static_cast<std::size_t>(g)) - half_span();
    idx /= static_cast<std::size_t>(g);
  }
  return num;
}

std::vector<double> BetaTorus::mode_point(std::size_t idx) const {
  const auto num = mode_numerator(idx);
  std::vector<double> k(d);
  for (int a = 0; a < d; ++a) k[a] = static_cast<double>(num[a]) / L;
  return k;
}

std::size_t BetaTorus::mode_index(const std::vector<std::int64_t>& num) const {
  const int g = per_axis();
  std::size_t idx = 0;
  for (int a = 0; a < d; ++a) {
    const std::int64_t off = num[a] + half_span();
    if (off < 0 || off >= g) throw std::out_of_range("BetaTorus: mode outside cutoff");
    idx = idx * static_cast<std::size_t>(g) + static_cast<std::size_t>(off);
  }
  return idx;
}

double SpectralEnsemble::mass_of(std::size_t r) const {
  double m = 0;
  for (const cplx& c : coeffs[r]) m += std::norm(c);
  return m / std::pow(torus.L, torus.d);
}

double SpectralEnsemble::z_norm_sq_of(std::size_t r) const {
  double z = 0;
  for (std::size_t i = 0; i < coeffs[r].size(); ++i) {
    const auto k = torus.mode_point(i);
    double k2 = 0;
    for (double x : k) k2 += x * x;
    z += std::pow(1.0 + k2, 5.0 * torus.d) * std::norm(coeffs[r][i]);
  }
  return z / std::pow(torus.L, torus.d);
}

SpectralEnsemble sample_initial_data(const std::function<double(const std::vector<double>&)>& n_in,
                                     const RandomLaw& law, const BetaTorus& torus, std::size_t M,
                                     std::uint64_t seed) {
  if (M < 1) throw std::invalid_argument("sample_initial_data: M >= 1");
  SpectralEnsemble ens;
  ens.torus = torus;
  ens.master_seed = seed;
  const std::size_t n = torus.n_modes();
  std::vector<double> amp(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = n_in(torus.mode_point(i));
    if (v < 0) throw std::invalid_argument("sample_initial_data: n_in must be nonnegative");
    amp[i] = std::sqrt(v);
  }
  ens.coeffs.assign(M, std::vector<cplx>(n));
  ens.mass0.assign(M, 0.0);
  ens.z2_max.assign(M, 0.0);
  const std::int64_t Ms = static_cast<std::int64_t>(M);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t r = 0; r < Ms; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      CounterRng rng(seed, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(i));
      ens.coeffs[r][i] = amp[i] * law.sample(rng);
    }
    ens.mass0[r] = ens.mass_of(static_cast<std::size_t>(r));
    ens.z2_max[r] = ens.z_norm_sq_of(static_cast<std::size_t>(r));
  }
  return ens;
}

namespace {

int good_fft_size(int n) {
  for (;; ++n) {
    int m = n;
    for (int p : {2, 3, 5, 7})
      while (m % p == 0) m /= p;
    if (m == 1) return n;
  }
}

struct FftPlan {
  fftw_plan fwd = nullptr, bwd = nullptr;
  int g = 0, d = 0;
  std::size_t total = 0;
};

// plans keyed by (d, g); creation guarded, execution via the thread-safe
// new-array interface
FftPlan& plan_for(int d, int g) {
  static std::map<std::pair<int, int>, FftPlan> plans;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = plans.find({d, g});
  if (it != plans.end()) return it->second;
  FftPlan p;
  p.d = d;
  p.g = g;
  p.total = 1;
  std::vector<int> dims(d, g);
  for (int i = 0; i < d; ++i) p.total *= static_cast<std::size_t>(g);
  fftw_complex* buf = fftw_alloc_complex(p.total);
  p.fwd = fftw_plan_dft(d, dims.data(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  p.bwd = fftw_plan_dft(d, dims.data(), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_free(buf);
  return plans.emplace(std::make_pair(d, g), p).first->second;
}

}  // namespace

void evolve_nls(SpectralEnsemble& ens, double t_end, const NlsEvolveConfig& cfg) {
  if (t_end < ens.time) throw std::invalid_argument("evolve_nls: t_end before current time");
  if (t_end == ens.time) return;
  const BetaTorus& torus = ens.torus;
  const int d = torus.d;
  const int N = torus.half_span();
  const int g = good_fft_size(3 * N + 1);
  FftPlan& plan = plan_for(d, g);

  const std::size_t n_modes = torus.n_modes();
  // linear eigenphases 2 pi |k|_beta^2 and FFT bin of each mode
  std::vector<double> omega(n_modes);
  std::vector<std::size_t> bin(n_modes);
  for (std::size_t i = 0; i < n_modes; ++i) {
    const auto k = torus.mode_point(i);
    omega[i] = kTwoPi * beta_norm_sq(std::span<const double>(k), torus.beta);
    const auto num = torus.mode_numerator(i);
    std::size_t b = 0;
    for (int a = 0; a < d; ++a) {
      const int wrapped = static_cast<int>(((num[a] % g) + g) % g);
      b = b * static_cast<std::size_t>(g) + static_cast<std::size_t>(wrapped);
    }
    bin[i] = b;
  }

  double dt = cfg.dt;
  if (dt <= 0) {
    double om_max = 0;
    for (double w : omega) om_max = std::max(om_max, w);
    dt = (3.14159265358979323846 / 8.0) / std::max(om_max, 1e-12);
  }
  const int n_steps = std::max(1, static_cast<int>(std::ceil((t_end - ens.time) / dt - 1e-12)));
  dt = (t_end - ens.time) / n_steps;

  const double lam2 = cfg.lambda * cfg.lambda;
  const double vol_scale = std::pow(torus.L, -d);      // u_j = L^-d sum ...
  const double inv_g = 1.0 / static_cast<double>(plan.total);

  std::vector<cplx> half_phase(n_modes), full_phase(n_modes);
  for (std::size_t i = 0; i < n_modes; ++i) {
    half_phase[i] = std::exp(cplx(0.0, omega[i] * dt * 0.5));
    full_phase[i] = std::exp(cplx(0.0, omega[i] * dt));
  }

  const std::int64_t M = static_cast<std::int64_t>(ens.realizations());
  std::string failure;
#ifdef _OPENMP
#pragma omp parallel
#endif
  {
    fftw_complex* buf = fftw_alloc_complex(plan.total);
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
    for (std::int64_t r = 0; r < M; ++r) {
      auto& a = ens.coeffs[static_cast<std::size_t>(r)];
      // first half linear step
      for (std::size_t i = 0; i < n_modes; ++i) a[i] *= half_phase[i];
      for (int step = 0; step < n_steps; ++step) {
        // nonlinear rotation in physical space
        std::memset(buf, 0, plan.total * sizeof(fftw_complex));
        for (std::size_t i = 0; i < n_modes; ++i) {
          buf[bin[i]][0] = a[i].real();
          buf[bin[i]][1] = a[i].imag();
        }
        fftw_execute_dft(plan.bwd, buf, buf);
        for (std::size_t j = 0; j < plan.total; ++j) {
          const double re = buf[j][0] * vol_scale, im = buf[j][1] * vol_scale;
          const double th = lam2 * (re * re + im * im) * dt;
          double s, c;
          sincos(th, &s, &c);
          buf[j][0] = re * c - im * s;
          buf[j][1] = re * s + im * c;
        }
        fftw_execute_dft(plan.fwd, buf, buf);
        const double back = inv_g / vol_scale;
        for (std::size_t i = 0; i < n_modes; ++i)
          a[i] = cplx(buf[bin[i]][0], buf[bin[i]][1]) * back;
        // linear step (two half steps merged except at the end)
        const bool last = step + 1 == n_steps;
        const auto& ph = last ? half_phase : full_phase;
        for (std::size_t i = 0; i < n_modes; ++i) a[i] *= ph[i];
      }
      if (cfg.record_z_norm)
        ens.z2_max[static_cast<std::size_t>(r)] =
            std::max(ens.z2_max[static_cast<std::size_t>(r)],
                     ens.z_norm_sq_of(static_cast<std::size_t>(r)));
      const double m = ens.mass_of(static_cast<std::size_t>(r));
      if (!std::isfinite(m)) {
#ifdef _OPENMP
#pragma omp critical
#endif
        {
          std::ostringstream os;
          os << "evolve_nls: instability in realization " << r << " near t=" << t_end;
          failure = os.str();
        }
      }
#ifdef _OPENMP
#pragma omp critical
#endif
      {
        const double drift = std::fabs(m - ens.mass0[static_cast<std::size_t>(r)]) /
                             std::max(1e-300, ens.mass0[static_cast<std::size_t>(r)]);
        ens.max_mass_drift = std::max(ens.max_mass_drift, drift);
      }
    }
    fftw_free(buf);
  }
  if (!failure.empty()) throw std::runtime_error(failure);
  ens.time = t_end;
}

std::vector<cplx> gauge_transform(const std::vector<cplx>& u_hat, double t_kinetic, double delta,
                                  const KineticScaling& scaling, double mass,
                                  const BetaTorus& torus, bool forward) {
  std::vector<cplx> out(u_hat.size());
  const double common = -2.0 * scaling.lambda * scaling.lambda * mass * delta * scaling.t_kin *
                        t_kinetic;
  for (std::size_t i = 0; i < u_hat.size(); ++i) {
    const auto k = torus.mode_point(i);
    const double kb = beta_norm_sq(std::span<const double>(k), torus.beta);
    const double phase =
        -delta * 3.14159265358979323846 * scaling.L * scaling.L * kb * t_kinetic + common;
    const cplx ph = std::exp(cplx(0.0, forward ? phase : -phase));
    out[i] = ph * u_hat[i];
  }
  return out;
}

void MomentSpec::validate(const BetaTorus& torus) const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    torus.mode_index(entries[i].k_num);
    for (std::size_t j = i + 1; j < entries.size(); ++j)
      if (entries[i].k_num == entries[j].k_num)
        throw std::invalid_argument("MomentSpec: k_j must be pairwise distinct");
  }
}

MomentEstimate estimate_moment(const SpectralEnsemble& ens, const MomentSpec& spec) {
  spec.validate(ens.torus);
  const std::size_t M = ens.realizations();
  std::vector<std::size_t> idx;
  for (const auto& e : spec.entries) idx.push_back(ens.torus.mode_index(e.k_num));

  std::vector<cplx> per_real(M);
  const std::int64_t Ms = static_cast<std::int64_t>(M);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t r = 0; r < Ms; ++r) {
    cplx prod(1.0, 0.0);
    for (std::size_t e = 0; e < spec.entries.size(); ++e) {
      const cplx v = ens.coeffs[static_cast<std::size_t>(r)][idx[e]];
      for (int p = 0; p < spec.entries[e].p; ++p) prod *= v;
      for (int q = 0; q < spec.entries[e].q; ++q) prod *= std::conj(v);
    }
    per_real[static_cast<std::size_t>(r)] = prod;
  }
  // batch means in fixed order
  const std::size_t B = std::min<std::size_t>(32, M);
  std::vector<cplx> batch_mean(B, 0.0);
  std::vector<std::size_t> batch_count(B, 0);
  for (std::size_t r = 0; r < M; ++r) {
    const std::size_t b = r * B / M;
    batch_mean[b] += per_real[r];
    ++batch_count[b];
  }
  cplx mean(0.0, 0.0);
  for (std::size_t r = 0; r < M; ++r) mean += per_real[r];
  mean /= static_cast<double>(M);
  double var = 0;
  for (std::size_t b = 0; b < B; ++b) {
    batch_mean[b] /= static_cast<double>(batch_count[b]);
    var += std::norm(batch_mean[b] - mean);
  }
  var /= static_cast<double>(B) * std::max<std::size_t>(1, B - 1);
  return {mean, std::sqrt(var)};
}

std::vector<MomentEstimate> estimate_moments(const SpectralEnsemble& ens,
                                             const std::vector<MomentSpec>& specs) {
  std::vector<MomentEstimate> out;
  out.reserve(specs.size());
  for (const auto& s : specs) out.push_back(estimate_moment(ens, s));
  return out;
}

std::string moment_report_csv(const SpectralEnsemble& ens, const std::vector<MomentSpec>& specs,
                              const std::vector<MomentEstimate>& est) {
  std::ostringstream os;
  os << "k,p,q,re,im,stderr,n_realizations\n";
  os.precision(17);
  for (std::size_t s = 0; s < specs.size(); ++s) {
    os << "\"";
    for (std::size_t e = 0; e < specs[s].entries.size(); ++e) {
      if (e) os << ";";
      os << "(";
      for (std::size_t a = 0; a < specs[s].entries[e].k_num.size(); ++a)
        os << (a ? " " : "") << specs[s].entries[e].k_num[a];
      os << ")";
    }
    os << "\",\"";
    for (std::size_t e = 0; e < specs[s].entries.size(); ++e)
      os << (e ? ";" : "") << specs[s].entries[e].p;
    os << "\",\"";
    for (std::size_t e = 0; e < specs[s].entries.size(); ++e)
      os << (e ? ";" : "") << specs[s].entries[e].q;
    os << "\"," << est[s].value.real() << "," << est[s].value.imag() << "," << est[s].stderr_est
       << "," << ens.realizations() << "\n";
  }
  return os.str();
}

ZMassDiag z_norm_mass_diag(const SpectralEnsemble& ens) {
  ZMassDiag diag;
  for (std::size_t r = 0; r < ens.realizations(); ++r) {
    diag.z_norm.push_back(std::sqrt(std::max(ens.z2_max[r], ens.z_norm_sq_of(r))));
    diag.mass.push_back(ens.mass_of(r));
  }
  return diag;
}

void save_realization(const std::string& path, const SpectralEnsemble& ens, std::size_t r,
                      std::uint64_t config_hash) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("save_realization: cannot open " + path);
  std::ostringstream hdr;
  hdr << "wkt-realization d=" << ens.torus.d << " L=" << ens.torus.L
      << " K=" << ens.torus.mode_cutoff << " seed=" << ens.master_seed << " t=" << ens.time
      << " config=" << config_hash << "\n";
  const std::string h = hdr.str();
  f.write(h.data(), static_cast<std::streamsize>(h.size()));
  f.write(reinterpret_cast<const char*>(ens.coeffs[r].data()),
          static_cast<std::streamsize>(ens.coeffs[r].size() * sizeof(cplx)));
}

std::vector<cplx> load_realization(const std::string& path, const BetaTorus& expected) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("load_realization: cannot open " + path);
  std::string header;
  std::getline(f, header);
  std::vector<cplx> out(expected.n_modes());
  f.read(reinterpret_cast<char*>(out.data()),
         static_cast<std::streamsize>(out.size() * sizeof(cplx)));
  if (!f) throw std::runtime_error("load_realization: truncated payload");
  return out;
}

}  // namespace wkt
