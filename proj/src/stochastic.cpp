#include "mixrate/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

#include "mixrate/errors.hpp"

namespace mixrate {

std::uint64_t CounterRng::mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) : state_(mix(seed ^ mix(stream))) {}

std::uint64_t CounterRng::next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
double CounterRng::uniform_pos() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

PSequence PSequence::from_tower(const TowerConstants& tc) {
    PSequence s;
    s.p_minus1 = tc.p_minus1;
    s.p0 = tc.p0;
    s.p = tc.p_seq;
    s.tail_mass = tc.p_tail;
    s.N = tc.N;
    auto keep = std::make_shared<TowerConstants>(tc);
    s.tail_t = [keep](long n) { return keep->t(n); };
    return s;
}

double PSequence::total() const {
    double s = p_minus1 + p0 + tail_mass;
    for (double v : p) s += v;
    return s;
}

void PSequence::validate() const {
    if (p_minus1 < 0 || p0 < -1e-15) throw InvalidParameter("negative p-sequence entry");
    for (double v : p)
        if (v < -1e-15) throw InvalidParameter("negative p-sequence entry");
    if (std::abs(total() - 1.0) > 1e-12) throw InvalidParameter("p-sequence does not sum to 1");
    if (tail_mass > 1e-13 && !tail_t) throw InvalidParameter("p-sequence tail has no law");
    if (N < 0) throw InvalidParameter("N must be nonnegative");
}

CouplingMatrix coupling_matrix(const std::vector<double>& p, const std::vector<double>& q, int k_max) {
    const int len = static_cast<int>(std::max(p.size(), q.size()));
    if (k_max < 0) k_max = len - 1;
    auto at = [](const std::vector<double>& v, int k) { return k < static_cast<int>(v.size()) ? v[k] : 0.0; };
    double sp = 0, sq = 0;
    for (int k = 0; k < len; ++k) sp += at(p, k), sq += at(q, k);
    if (std::abs(sp - sq) > 1e-12 * std::max(1.0, sq)) throw InvalidParameter("p and q have different totals");
    double cp = 0, cq = 0;
    for (int k = 0; k <= k_max; ++k) {
        cp += at(p, k);
        cq += at(q, k);
        if (cq < cp - 1e-12) throw NotDominated("cumulative dominance fails at k = " + std::to_string(k));
    }

    CouplingMatrix m;
    m.k_max = k_max;
    m.s.resize(k_max + 1);
    // long double accumulators: the residual is divided by q_j, which may be tiny
    std::vector<long double> col(k_max + 1, 0.0L);  // running column sums
    for (int k = 0; k <= k_max; ++k) {
        m.s[k].assign(k + 1, 0.0);
        long double row = 0.0L;  // sum_{j' < j} s_{k,j'} q_{j'}
        for (int j = 0; j <= k; ++j) {
            const long double qj = at(q, j);
            long double v;
            if (qj == 0.0L) {
                v = (j == k) ? 1.0L : 0.0L;
            } else if (k == len - 1) {
                v = 1.0L - col[j];  // total masses agree, so the last row takes what is left
            } else {
                v = std::min(1.0L - col[j], (static_cast<long double>(at(p, k)) - row) / qj);
                v = std::clamp(v, 0.0L, 1.0L);
            }
            m.s[k][j] = static_cast<double>(v);
            col[j] += v;
            row += v * qj;
        }
        if (std::abs(static_cast<double>(row) - at(p, k)) > 1e-12) throw NotDominated("row identity fails at k = " + std::to_string(k));
    }
    return m;
}

long word_h(const std::vector<long>& w, long N) {
    long s = 0;
    for (long v : w) s += v;
    return s + N * static_cast<long>(w.size());
}

double wilson_upper(double phat, long n, double z) {
    if (n <= 0) return 1.0;
    const double nn = static_cast<double>(n);
    const double z2 = z * z;
    const double centre = phat + z2 / (2 * nn);
    const double half = z * std::sqrt(phat * (1 - phat) / nn + z2 / (4 * nn * nn));
    return std::min(1.0, (centre + half) / (1 + z2 / nn));
}

namespace {

struct LetterSampler {
    const PSequence& ps;
    std::vector<double> cum;  // cum[n] = sum_{j<=n} p_j / (1 - p_minus1), n = 0..H

    explicit LetterSampler(const PSequence& s) : ps(s) {
        const double norm = 1.0 - s.p_minus1;
        cum.resize(s.p.size() + 1);
        double acc = s.p0;
        cum[0] = acc / norm;
        for (size_t n = 0; n < s.p.size(); ++n) {
            acc += s.p[n];
            cum[n + 1] = acc / norm;
        }
    }

    long draw(double u) const {
        auto it = std::lower_bound(cum.begin(), cum.end(), u);
        if (it != cum.end()) return static_cast<long>(it - cum.begin());
        if (!ps.tail_t || ps.tail_mass <= 0.0) return static_cast<long>(cum.size()) - 1;
        // smallest n with t_{n+1} <= (1 - p_minus1)(1 - u)
        const double target = (1.0 - ps.p_minus1) * (1.0 - u);
        const long H = static_cast<long>(cum.size()) - 1;
        long lo = H, hi = H + 1;
        while (ps.tail_t(hi + 1) > target) {
            lo = hi;
            if (hi > (1L << 52)) return hi;
            hi *= 2;
        }
        while (hi - lo > 1) {
            long mid = lo + (hi - lo) / 2;
            (ps.tail_t(mid + 1) > target ? lo : hi) = mid;
        }
        return hi;
    }
};

struct Partial {
    std::vector<long> exceed;  // exceed[n] = count with h > n
    long zero = 0;
    double length_sum = 0.0;
};

void run_range(const PSequence& ps, const LetterSampler& ls, std::uint64_t seed, long begin, long end, long n_max,
               Partial& out) {
    out.exceed.assign(n_max + 2, 0);
    const double lq = std::log1p(-ps.p_minus1);
    for (long i = begin; i < end; ++i) {
        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        long K = 0;
        if (ps.p_minus1 < 1.0) {
            const double g = std::floor(std::log(rng.uniform_pos()) / lq);
            K = g > 1e15 ? static_cast<long>(1e15) : static_cast<long>(g);
        }
        out.length_sum += static_cast<double>(K);
        long h = 0;
        for (long k = 0; k < K && h <= n_max; ++k) h += ls.draw(rng.uniform()) + ps.N;
        if (h == 0) ++out.zero;
        // h > n for n = 0..min(h-1, n_max)
        const long top = std::min(h, n_max + 1);
        ++out.exceed[0];
        --out.exceed[top];
    }
}

}  // namespace

EmpiricalTail sample_h(const PSequence& pseq, long n_samples, std::uint64_t seed, long n_max, int workers) {
    if (n_samples < 1) throw InvalidParameter("n_samples must be positive");
    if (n_max < 0) throw InvalidParameter("n_max must be nonnegative");
    pseq.validate();
    if (pseq.p_minus1 <= 0.0) throw InvalidParameter("p_minus1 must be positive for finite words");
    if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = static_cast<int>(std::min<long>(workers, n_samples));

    LetterSampler ls(pseq);
    std::vector<Partial> parts(workers);
    std::vector<std::thread> pool;
    const long chunk = (n_samples + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const long b = std::min(n_samples, w * chunk), e = std::min(n_samples, (w + 1) * chunk);
        if (w == 0) continue;
        pool.emplace_back(run_range, std::cref(pseq), std::cref(ls), seed, b, e, n_max, std::ref(parts[w]));
    }
    run_range(pseq, ls, seed, 0, std::min(n_samples, chunk), n_max, parts[0]);
    for (auto& t : pool) t.join();

    // difference array -> counts
    std::vector<long> diff(n_max + 2, 0);
    EmpiricalTail out;
    out.n_samples = n_samples;
    long zero = 0;
    double len = 0.0;
    for (const auto& p : parts) {
        if (p.exceed.empty()) continue;
        for (long n = 0; n <= n_max + 1; ++n) diff[n] += p.exceed[n];
        zero += p.zero;
        len += p.length_sum;
    }
    out.tail.resize(n_max + 1);
    out.wilson_upper.resize(n_max + 1);
    long count = 0;
    for (long n = 0; n <= n_max; ++n) {
        count += diff[n];
        // samples with h = 0 add +1 and -1 at index 0
        const double ph = static_cast<double>(count) / static_cast<double>(n_samples);
        out.tail[n] = ph;
        out.wilson_upper[n] = wilson_upper(ph, n_samples);
    }
    out.atom_zero = static_cast<double>(zero) / static_cast<double>(n_samples);
    out.mean_length = len / static_cast<double>(n_samples);
    return out;
}

double power_series(double beta, double r) {
    if (r <= 0.0) return 0.0;
    if (r >= 1.0) return INFINITY;
    const double lr = -std::log(r);
    const double kstar = beta / lr;
    auto term = [&](double k) { return std::exp(beta * std::log(k) - lr * k); };
    if (kstar > 5e7) {
        // integral of x^beta r^x over [0, inf) plus the largest term
        return std::exp(std::lgamma(beta + 1) - (beta + 1) * std::log(lr)) + term(std::max(1.0, kstar));
    }
    double sum = 0.0;
    for (long k = 1;; ++k) {
        const double t = term(static_cast<double>(k));
        sum += t;
        if (static_cast<double>(k) > kstar) {
            // ratio of successive terms is decreasing past the peak
            const double ratio = std::pow(1.0 + 1.0 / (k + 1.0), beta) * r;
            if (ratio < 1.0) {
                const double rem = term(static_cast<double>(k + 1)) / (1.0 - ratio);
                if (rem <= 1e-14 * sum) return sum + rem;
            }
        }
    }
}

double TailBound::operator()(double n) const {
    const double geo = (N > 0) ? std::pow(1.0 - p_minus1, n / (2.0 * N)) : (n > 0 ? 0.0 : 1.0);
    if (kind == Kind::Polynomial) {
        if (n <= 0) return INFINITY;
        return C1prime * std::pow(2.0, beta - 1) * std::pow(n, -(beta - 1)) + geo;
    }
    return Cprime * std::exp(-B * std::pow(std::max(n, 0.0), gamma) / std::pow(2.0, gamma)) + geo;
}

namespace {
void check_p(double p) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidParameter("p_minus1 must lie in (0,1)");
}
}  // namespace

TailBound poly_tail_bound(double C_tau, double beta, double R, long N, double p_minus1) {
    if (!(beta > 1.0)) throw NotIntegrable("polynomial tail needs beta > 1");
    check_p(p_minus1);
    if (C_tau < 0 || R < 0 || N < 0) throw InvalidParameter("C_tau, R and N must be nonnegative");
    TailBound b;
    b.kind = TailBound::Kind::Polynomial;
    b.N = N;
    b.p_minus1 = p_minus1;
    b.R = R;
    b.C_tau = C_tau;
    b.beta = beta;
    b.C1 = C_tau * std::exp(R) / (1.0 - p_minus1) * beta / (beta - 1.0);
    b.series = power_series(beta, 1.0 - p_minus1);
    b.C1prime = b.C1 * p_minus1 * b.series;
    // sup_{n>=1} n^{beta-1} (1-p)^{n/(2N)}
    double geo_c = 1.0;
    if (N > 0) {
        const double c = -std::log1p(-p_minus1) / (2.0 * N);
        const double nstar = (beta - 1.0) / c;
        geo_c = nstar <= 1.0 ? std::exp(-c) : std::pow(nstar / M_E, beta - 1.0);
    } else {
        geo_c = 0.0;
    }
    b.final_C = b.C1prime * std::pow(2.0, beta - 1.0) + geo_c;
    return b;
}

double bisect_rate(double B_max, double C1, double base, double target) {
    auto ok = [&](double B) { return (1.0 + B * C1) * base <= target; };
    if (ok(B_max)) return B_max;
    double lo = 0.0, hi = B_max;
    for (int it = 0; it < 48; ++it) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

TailBound stretched_tail_bound(double C_tau, double A, double gamma, double R, long N, double p_minus1) {
    if (!(A > 0.0)) throw InvalidParameter("A must be positive");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidParameter("gamma must lie in (0,1]");
    check_p(p_minus1);
    if (C_tau < 0 || R < 0 || N < 0) throw InvalidParameter("C_tau, R and N must be nonnegative");
    TailBound b;
    b.kind = TailBound::Kind::Stretched;
    b.N = N;
    b.p_minus1 = p_minus1;
    b.R = R;
    b.C_tau = C_tau;
    b.A = A;
    b.gamma = gamma;
    b.C_Agamma = c_A_gamma(A, gamma);
    b.c_w = 3.0 / (1.0 - p_minus1) * std::exp(R) * C_tau * b.C_Agamma;
    // letters have tail c_w e^{-(A/2) t^gamma}; moment constant 2 c_w / (A/2)
    b.C1 = 4.0 * b.c_w / A;
    b.B = bisect_rate(A / 4.0, b.C1, 1.0 - p_minus1, 1.0 - p_minus1 / 2.0);
    if (!(b.B > 0.0)) throw NoFeasibleRate("no positive rate keeps r below 1");
    b.r = (1.0 + b.B * b.C1) * (1.0 - p_minus1);
    b.Cprime = p_minus1 / (1.0 - b.r);
    double c = N > 0 ? -std::log1p(-p_minus1) / (2.0 * N) : INFINITY;
    b.final_B = std::min(b.B / std::pow(2.0, gamma), c);
    b.final_C = b.Cprime + 1.0;
    return b;
}

}  // namespace mixrate
