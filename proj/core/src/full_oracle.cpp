#include <algorithm>
#include <cmath>
#include <sstream>

#include "dsf/errors.hpp"
#include "dsf/numerics.hpp"
#include "dsf/oracle.hpp"

namespace dsf {

ModeGrid make_mode_grid(double half_width, double spacing, double gamma) {
    if (!(half_width > 0.0) || !(spacing > 0.0) || !(gamma > 0.0) || !std::isfinite(half_width))
        throw ValidationError("mode grid: half_width, spacing and gamma must be > 0");
    const long half = std::lround(half_width / spacing);
    if (std::abs(half * spacing - half_width) > 1e-9 * half_width)
        throw ValidationError("mode grid: half_width must be a multiple of spacing");
    ModeGrid g;
    g.half_width = half_width;
    g.spacing = spacing;
    g.gamma = gamma;
    g.coupling = std::sqrt(gamma * spacing / (4.0 * kPi));
    g.detuning.resize(2 * half + 1);
    for (long i = -half; i <= half; ++i) g.detuning[i + half] = spacing * static_cast<double>(i);
    return g;
}

double disabled_delay(const ModeGrid& grid) { return kPi / grid.spacing; }

double OracleState::norm() const {
    double s = std::norm(a);
    for (const auto& v : b)
        for (const auto& x : v) s += std::norm(x);
    for (const auto& x : c_pair) s += std::norm(x);
    for (const auto& x : c_same) s += std::norm(x);
    return s;
}

OracleState initial_state(const ModeGrid& grid) {
    const std::size_t M = grid.size();
    OracleState s;
    s.a = 1.0;
    s.b[0].assign(M, 0.0);
    s.b[1].assign(M, 0.0);
    s.c_pair.assign(M * (M - 1) / 2, 0.0);
    s.c_same.assign(M, 0.0);
    return s;
}

StateObservables observables_from_state(const OracleState& s, const ModeGrid&) {
    StateObservables o;
    o.t = s.t;
    o.p2 = std::norm(s.a);
    for (int r = 0; r < 2; ++r)
        for (const auto& x : s.b[r]) o.p1_atom[r] += std::norm(x);
    o.p1 = o.p1_atom[0] + o.p1_atom[1];
    for (std::size_t m = 0; m < s.modes(); ++m) o.coherence += s.b[0][m] * std::conj(s.b[1][m]);
    for (const auto& x : s.c_same) o.same_mode += std::norm(x);
    double pairs = 0.0;
    for (const auto& x : s.c_pair) pairs += std::norm(x);
    o.pair = pairs + o.same_mode;
    o.norm = o.p2 + o.p1 + o.pair;
    return o;
}

namespace {

std::size_t row_offset(std::size_t m, std::size_t n) { return m * n - m * (m - 1) / 2; }

// One packed symmetric N x N two-photon block in the bright/dark basis:
//   B'_mn = -i (D_m + D_n) B_mn + kappa (w_n Z_m + w_m Z_n)
// and it feeds Z'_m through R_m = sum_n w_n B_mn.
struct Block {
    std::vector<double> re, im;    // state y
    std::vector<double> wre, wim;  // Horner iterate
    std::vector<double> w;         // real coupling profile
    double kr = 0.0, ki = 0.0;     // kappa
    Complex chi;                   // Z' gets chi * w_m * a - conj(kappa) * R_m
    std::vector<Complex> z, zw;    // single-photon partner vector and its iterate
    std::vector<double> rre, rim;  // R_m
};

struct Chunk {
    std::size_t row_begin, row_end;
    std::vector<double> cre, cim;  // column sums of this chunk
    double norm = 0.0;
};

// For a linear autonomous system RK4 is the degree-4 Taylor polynomial of
// exp(hL); it is evaluated as w <- y + (h/4) L y, w <- y + (h/3) L w,
// w <- y + (h/2) L w, y <- y + h L w. L w only needs w_mn itself and the Z part
// of w, so every stage updates w in place.
// S = 0 reads y as w, S = 3 writes y.
template <int S>
void block_rows(Block& B, const double* d, std::size_t N, double hc, const Complex* zin, Chunk& ch) {
    const double* w = B.w.data();
    std::vector<double> zr(N), zi(N);
    for (std::size_t n = 0; n < N; ++n) {
        zr[n] = zin[n].real();
        zi[n] = zin[n].imag();
    }
    double* __restrict yr = B.re.data();
    double* __restrict yi = B.im.data();
    double* __restrict wr = B.wre.data();
    double* __restrict wi = B.wim.data();
    const double* in_re = S == 0 ? yr : wr;
    const double* in_im = S == 0 ? yi : wi;
    double* out_re = S == 3 ? yr : wr;
    double* out_im = S == 3 ? yi : wi;
    double* __restrict cr = ch.cre.data();
    double* __restrict ci = ch.cim.data();
    const double kr = B.kr, ki = B.ki;
    double norm_acc = 0.0;

    for (std::size_t m = ch.row_begin; m < ch.row_end; ++m) {
        const std::size_t off = row_offset(m, N);
        const double wm = w[m], dm = d[m], zrm = zr[m], zim = zi[m];
        double rs_re = 0.0, rs_im = 0.0, nrm = 0.0;
        {
            // diagonal: source 2 w_m Z_m, counted once in R_m
            const double bre = in_re[off], bim = in_im[off];
            rs_re += wm * bre;
            rs_im += wm * bim;
            const double sr = 2.0 * wm * zrm, si = 2.0 * wm * zim;
            const double om = 2.0 * dm;
            const double lre = om * bim + kr * sr - ki * si;
            const double lim = -om * bre + kr * si + ki * sr;
            const double nr = yr[off] + hc * lre, ni = yi[off] + hc * lim;
            out_re[off] = nr;
            out_im[off] = ni;
            if constexpr (S == 3) norm_acc += nr * nr + ni * ni;
        }
        const std::size_t len = N - m;
        const double* __restrict pr = in_re + off;
        const double* __restrict pi = in_im + off;
        const double* __restrict y0r = yr + off;
        const double* __restrict y0i = yi + off;
        double* __restrict qr = out_re + off;
        double* __restrict qi = out_im + off;
        const double* __restrict wn = w + m;
        const double* __restrict dn = d + m;
        const double* __restrict zrn = zr.data() + m;
        const double* __restrict zin_ = zi.data() + m;
        double* __restrict crr = cr + m;
        double* __restrict cii = ci + m;
#pragma omp simd reduction(+ : rs_re, rs_im, nrm)
        for (std::size_t j = 1; j < len; ++j) {
            const double bre = pr[j], bim = pi[j];
            rs_re += wn[j] * bre;
            rs_im += wn[j] * bim;
            crr[j] += wm * bre;
            cii[j] += wm * bim;
            const double sr = wn[j] * zrm + wm * zrn[j];
            const double si = wn[j] * zim + wm * zin_[j];
            const double om = dm + dn[j];
            const double lre = om * bim + kr * sr - ki * si;
            const double lim = -om * bre + kr * si + ki * sr;
            const double nr = y0r[j] + hc * lre, ni = y0i[j] + hc * lim;
            qr[j] = nr;
            qi[j] = ni;
            if constexpr (S == 3) nrm += 2.0 * (nr * nr + ni * ni);
        }
        B.rre[m] = rs_re;
        B.rim[m] = rs_im;
        norm_acc += nrm;
    }
    ch.norm = norm_acc;
}

// Two-atom mirror-symmetric integrator. With the atoms swapped under eta -> -eta,
// the amplitudes reduce to one direction; the combinations X = x + y, Y = x - y
// (x = b1(D,+), y = b1(D,-)) and P = A + C, Q = A - C (A = S(++), C = S(+-))
// decouple into two blocks with real coupling profiles 2cos(theta), 2sin(theta).
class MirrorIntegrator {
public:
    MirrorIntegrator(const ModeGrid& grid, double tau, double phi, double g, int threads)
        : N_(grid.per_direction()), d_(grid.detuning), threads_(std::max(1, threads)) {
        const std::size_t packed = N_ * (N_ + 1) / 2;
        for (int k = 0; k < 2; ++k) {
            Block& B = blocks_[k];
            B.re.assign(packed, 0.0);
            B.im.assign(packed, 0.0);
            B.wre.assign(packed, 0.0);
            B.wim.assign(packed, 0.0);
            B.w.resize(N_);
            B.z.assign(N_, 0.0);
            B.zw.assign(N_, 0.0);
            B.rre.assign(N_, 0.0);
            B.rim.assign(N_, 0.0);
        }
        for (std::size_t m = 0; m < N_; ++m) {
            const double theta = 0.5 * (phi + d_[m] * tau);
            blocks_[0].w[m] = 2.0 * std::cos(theta);
            blocks_[1].w[m] = 2.0 * std::sin(theta);
        }
        blocks_[0].kr = g;
        blocks_[0].ki = 0.0;
        blocks_[0].chi = g;
        blocks_[1].kr = 0.0;
        blocks_[1].ki = -g;
        blocks_[1].chi = Complex(0.0, g);
        // balance chunks by packed element count
        const double total = static_cast<double>(packed);
        std::size_t row = 0;
        for (int c = 0; c < threads_; ++c) {
            const double target = total * (c + 1) / threads_;
            std::size_t end = row;
            while (end < N_ && static_cast<double>(row_offset(end + 1, N_)) <= target) ++end;
            if (c == threads_ - 1) end = N_;
            for (auto& chs : chunks_) chs.push_back(Chunk{row, end, {}, {}, 0.0});
            row = end;
        }
        for (auto& chs : chunks_)
            for (auto& ch : chs) {
                ch.cre.assign(N_, 0.0);
                ch.cim.assign(N_, 0.0);
            }
    }

    void step(double h) {
        stage<0>(h / 4.0);
        stage<1>(h / 3.0);
        stage<2>(h / 2.0);
        stage<3>(h);
    }

    double norm() const { return norm_; }

    StateObservables observables(double t) const {
        StateObservables o;
        o.t = t;
        o.p2 = std::norm(a_);
        double sx = 0.0, sy = 0.0;
        for (std::size_t m = 0; m < N_; ++m) {
            sx += std::norm(blocks_[0].z[m]);
            sy += std::norm(blocks_[1].z[m]);
        }
        o.p1 = sx + sy;
        o.p1_atom[0] = o.p1_atom[1] = 0.5 * o.p1;
        o.coherence = 0.5 * (sx - sy);
        double pair = 0.0, same = 0.0;
        for (std::size_t m = 0; m < N_; ++m) {
            const std::size_t off = row_offset(m, N_);
            for (std::size_t j = 0; j < N_ - m; ++j) {
                const double wgt = j == 0 ? 1.0 : 2.0;
                for (const Block& B : blocks_)
                    pair += 0.5 * wgt * (B.re[off + j] * B.re[off + j] + B.im[off + j] * B.im[off + j]);
            }
            const Complex diag = Complex(blocks_[0].re[off] + blocks_[1].re[off],
                                         blocks_[0].im[off] + blocks_[1].im[off]);
            same += 0.25 * std::norm(diag);
        }
        o.pair = pair;
        o.same_mode = same;
        o.norm = o.p2 + o.p1 + o.pair;
        return o;
    }

    OracleState expand(double t) const {
        const std::size_t M = 2 * N_;
        OracleState s;
        s.t = t;
        s.a = a_;
        s.b[0].resize(M);
        s.b[1].resize(M);
        for (std::size_t m = 0; m < N_; ++m) {
            const Complex x = 0.5 * (blocks_[0].z[m] + blocks_[1].z[m]);
            const Complex y = 0.5 * (blocks_[0].z[m] - blocks_[1].z[m]);
            s.b[0][m] = x;
            s.b[0][m + N_] = y;
            s.b[1][m] = y;
            s.b[1][m + N_] = x;
        }
        auto packed = [&](const Block& B, std::size_t m, std::size_t n) {
            if (m > n) std::swap(m, n);
            const std::size_t k = row_offset(m, N_) + (n - m);
            return Complex(B.re[k], B.im[k]);
        };
        auto S = [&](std::size_t i, std::size_t j) {
            const std::size_t m = i % N_, n = j % N_;
            const Complex P = packed(blocks_[0], m, n), Q = packed(blocks_[1], m, n);
            const bool same_dir = (i < N_) == (j < N_);
            return same_dir ? 0.5 * (P + Q) : 0.5 * (P - Q);
        };
        s.c_pair.resize(M * (M - 1) / 2);
        s.c_same.resize(M);
        std::size_t k = 0;
        for (std::size_t i = 0; i < M; ++i) {
            s.c_same[i] = S(i, i) / std::sqrt(2.0);
            for (std::size_t j = i + 1; j < M; ++j) s.c_pair[k++] = S(i, j);
        }
        return s;
    }

private:
    template <int S>
    void stage(double hc) {
        for (int k = 0; k < 2; ++k) {
            Block& B = blocks_[k];
            const Complex* zin = S == 0 ? B.z.data() : B.zw.data();
            auto& chs = chunks_[k];
            for (auto& ch : chs) {
                std::fill(ch.cre.begin(), ch.cre.end(), 0.0);
                std::fill(ch.cim.begin(), ch.cim.end(), 0.0);
            }
            parallel_for(chs.size(), threads_, [&](std::size_t c) {
                block_rows<S>(B, d_.data(), N_, hc, zin, chs[c]);
            });
            for (auto& ch : chs)
                for (std::size_t n = 0; n < N_; ++n) {
                    B.rre[n] += ch.cre[n];
                    B.rim[n] += ch.cim[n];
                }
        }
        // single-photon and doubly-excited amplitudes, from the iterate before this stage
        const Complex ain = S == 0 ? a_ : aw_;
        Complex da = 0.0;
        std::vector<Complex> dz[2];
        for (int k = 0; k < 2; ++k) {
            const Block& B = blocks_[k];
            const Complex* zin = S == 0 ? B.z.data() : B.zw.data();
            const Complex kc = std::conj(Complex(B.kr, B.ki));
            Complex sum = 0.0;
            dz[k].resize(N_);
            for (std::size_t m = 0; m < N_; ++m) {
                sum += B.w[m] * zin[m];
                dz[k][m] = Complex(0.0, -d_[m]) * zin[m] + B.chi * B.w[m] * ain - kc * Complex(B.rre[m], B.rim[m]);
            }
            da -= std::conj(B.chi) * sum;
        }
        for (int k = 0; k < 2; ++k) {
            Block& B = blocks_[k];
            for (std::size_t m = 0; m < N_; ++m) {
                if constexpr (S == 3)
                    B.z[m] += hc * dz[k][m];
                else
                    B.zw[m] = B.z[m] + hc * dz[k][m];
            }
        }
        if constexpr (S == 3) {
            a_ += hc * da;
            double n = std::norm(a_);
            for (int k = 0; k < 2; ++k) {
                for (const auto& z : blocks_[k].z) n += std::norm(z);
                double pair = 0.0;
                for (const auto& ch : chunks_[k]) pair += ch.norm;
                n += 0.5 * pair;
            }
            norm_ = n;
        } else {
            aw_ = a_ + hc * da;
        }
    }

    std::size_t N_;
    std::vector<double> d_;
    int threads_;
    Block blocks_[2];
    std::vector<Chunk> chunks_[2];
    Complex a_ = 1.0, aw_ = 1.0;
    double norm_ = 1.0;
};

// Direct integrator for unequal atom couplings (no mirror symmetry). The
// two-photon sector is only carried when both atoms couple to the field.
class GeneralIntegrator {
public:
    GeneralIntegrator(const ModeGrid& grid, double tau, double phi, double g, std::array<double, 2> w)
        : grid_(grid), state_(initial_state(grid)) {
        const std::size_t M = grid.size();
        for (int r = 0; r < 2; ++r) {
            u_[r].resize(M);
            gw_[r] = g * w[r];
        }
        for (std::size_t m = 0; m < M; ++m) {
            const double theta = grid.mode_direction(m) * 0.5 * (phi + grid.mode_detuning(m) * tau);
            u_[0][m] = std::polar(1.0, theta);
            u_[1][m] = std::polar(1.0, -theta);
        }
        pairs_ = w[0] != 0.0 && w[1] != 0.0;
        if (!pairs_) {
            state_.c_pair.clear();
            state_.c_same.clear();
        }
    }

    void step(double h) {
        const State y0 = pack(state_);
        const State k1 = rhs(y0);
        const State k2 = rhs(axpy(y0, 0.5 * h, k1));
        const State k3 = rhs(axpy(y0, 0.5 * h, k2));
        const State k4 = rhs(axpy(y0, h, k3));
        State y = y0;
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        unpack(y, state_);
    }

    double norm() const { return state_.norm(); }
    const OracleState& state() const { return state_; }
    OracleState expand(double t) const {
        OracleState s = state_;
        const std::size_t M = grid_.size();
        if (!pairs_) {
            s.c_pair.assign(M * (M - 1) / 2, 0.0);
            s.c_same.assign(M, 0.0);
        }
        s.t = t;
        return s;
    }

private:
    using State = std::vector<Complex>;

    static State axpy(const State& y, double h, const State& k) {
        State out(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + h * k[i];
        return out;
    }

    State pack(const OracleState& s) const {
        State y;
        y.push_back(s.a);
        for (int r = 0; r < 2; ++r) y.insert(y.end(), s.b[r].begin(), s.b[r].end());
        if (pairs_) {
            // full symmetric S, S_mm = sqrt(2) c_same
            const std::size_t M = grid_.size();
            for (std::size_t m = 0; m < M; ++m) {
                y.push_back(std::sqrt(2.0) * s.c_same[m]);
                for (std::size_t n = m + 1; n < M; ++n) y.push_back(s.c_pair[pair_index(m, n, M)]);
            }
        }
        return y;
    }

    void unpack(const State& y, OracleState& s) const {
        const std::size_t M = grid_.size();
        std::size_t k = 0;
        s.a = y[k++];
        for (int r = 0; r < 2; ++r)
            for (std::size_t m = 0; m < M; ++m) s.b[r][m] = y[k++];
        if (pairs_) {
            for (std::size_t m = 0; m < M; ++m) {
                s.c_same[m] = y[k++] / std::sqrt(2.0);
                for (std::size_t n = m + 1; n < M; ++n) s.c_pair[pair_index(m, n, M)] = y[k++];
            }
        }
    }

    State rhs(const State& y) const {
        const std::size_t M = grid_.size();
        State f(y.size(), 0.0);
        const Complex a = y[0];
        auto b = [&](int r, std::size_t m) { return y[1 + r * M + m]; };
        const std::size_t s0 = 1 + 2 * M;
        std::vector<std::size_t> row(M);
        for (std::size_t m = 0, k = s0; m < M; ++m) {
            row[m] = k;
            k += M - m;
        }
        auto S = [&](std::size_t m, std::size_t n) {
            if (m > n) std::swap(m, n);
            return y[row[m] + (n - m)];
        };
        Complex da = 0.0;
        for (int r = 0; r < 2; ++r) {
            const int rb = 1 - r;
            for (std::size_t m = 0; m < M; ++m) {
                da -= gw_[rb] * u_[rb][m] * b(r, m);
                Complex db = Complex(0.0, -grid_.mode_detuning(m)) * b(r, m) +
                             gw_[rb] * std::conj(u_[rb][m]) * a;
                if (pairs_) {
                    Complex acc = 0.0;
                    for (std::size_t n = 0; n < M; ++n) acc += u_[r][n] * S(m, n);
                    db -= gw_[r] * acc;
                }
                f[1 + r * M + m] = db;
            }
        }
        f[0] = da;
        if (pairs_) {
            for (std::size_t m = 0; m < M; ++m)
                for (std::size_t n = m; n < M; ++n) {
                    Complex ds = Complex(0.0, -(grid_.mode_detuning(m) + grid_.mode_detuning(n))) * S(m, n);
                    for (int r = 0; r < 2; ++r)
                        ds += gw_[r] * (std::conj(u_[r][n]) * b(r, m) + std::conj(u_[r][m]) * b(r, n));
                    f[row[m] + (n - m)] = ds;
                }
        }
        return f;
    }

    const ModeGrid& grid_;
    OracleState state_;
    std::array<std::vector<Complex>, 2> u_;
    double gw_[2] = {0.0, 0.0};
    bool pairs_ = true;
};

}  // namespace

FullOracleRun simulate_full(const SystemParams& p, const ModeGrid& grid, const FullOracleOptions& opt) {
    if (grid.per_direction() < 3 || grid.per_direction() % 2 == 0)
        throw ValidationError("simulate_full: grid must be symmetric about zero detuning");
    if (grid.recurrence_time() <= p.t_max)
        throw ValidationError("simulate_full: recurrence time 2pi/spacing must exceed t_max");
    if (!(opt.dt > 0.0) || opt.dt > 0.05 / grid.half_width * (1.0 + 1e-12))
        throw ValidationError("simulate_full: dt must satisfy 0 < dt <= 0.05/half_width");
    const double tau = p.delay_disabled ? disabled_delay(grid) : p.tau;
    if (p.delay_disabled && p.t_max >= tau)
        throw ValidationError("simulate_full: delay-disabled run needs t_max < pi/spacing");

    FullOracleRun run;
    run.grid = grid;
    run.tau_used = tau;
    const double sample_dt = p.t_max / (p.n_samples - 1);
    const long sub = static_cast<long>(std::ceil(sample_dt / opt.dt - 1e-9));
    const double h = sample_dt / static_cast<double>(sub);
    run.dt_used = h;
    const bool mirror = opt.atom_weight[0] == opt.atom_weight[1];

    auto check = [&](double norm, long step) {
        if (!(std::abs(norm - 1.0) <= opt.norm_tolerance)) {
            std::ostringstream os;
            os << "simulate_full: norm drift " << norm - 1.0 << " exceeds " << opt.norm_tolerance
               << " at step " << step << " (t=" << h * step << ")";
            throw IntegratorError(os.str(), step, h * step);
        }
    };

    auto drive = [&](auto& integ, auto observe) {
        long step = 0;
        for (int i = 0; i < p.n_samples; ++i) {
            if (i > 0) {
                for (long k = 0; k < sub; ++k) {
                    integ.step(h);
                    ++step;
                    check(integ.norm(), step);
                }
            }
            const double t = p.sample_time(i);
            run.samples.push_back(observe(t));
            if (opt.on_sample) opt.on_sample(integ.expand(t));
        }
        run.steps = step;
    };

    if (mirror) {
        MirrorIntegrator integ(grid, tau, p.phi, grid.coupling * opt.atom_weight[0], opt.threads);
        drive(integ, [&](double t) { return integ.observables(t); });
    } else {
        GeneralIntegrator integ(grid, tau, p.phi, grid.coupling, opt.atom_weight);
        drive(integ, [&](double t) {
            OracleState s = integ.expand(t);
            return observables_from_state(s, grid);
        });
    }
    return run;
}

}  // namespace dsf
