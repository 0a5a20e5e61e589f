// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#include "wcsee/channels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

#include "wcsee/error.hpp"

namespace wcsee {

namespace {

constexpr double kLosOnly = 1e12;

double safe_azimuth(const Position2D& from, const Position2D& to) {
    // A receiver exactly below the UAV has no defined azimuth; its LoS
    // response is then taken at broadside.
    if (from == to) {
        return 0.0;
    }
    return azimuth(from, to);
}

double path_amplitude(const ScenarioConfig& cfg, double d) {
    return std::sqrt(cfg.rho0 * std::pow(d, -cfg.alpha));
}

CVec complex_normal_vector(int n, RngStream& rng) {
    CVec v(n);
    for (int i = 0; i < n; ++i) {
        v(i) = rng.complex_normal();
    }
    return v;
}

}  // namespace

CVec rician_mix(double k_factor, const CVec& los, const CVec& scattered) {
    if (k_factor >= kLosOnly) {
        return los;
    }
    const double w_los = std::sqrt(k_factor / (k_factor + 1.0));
    const double w_nlos = std::sqrt(1.0 / (k_factor + 1.0));
    return w_los * los + w_nlos * scattered;
}

CVec sample_rician_vector(double k_factor, const CVec& los, RngStream& rng) {
    const CVec scattered = complex_normal_vector(static_cast<int>(los.size()), rng);
    return rician_mix(k_factor, los, scattered);
}

CVec perturb_uehr_csi(const CVec& u, double nu, RngStream& rng) {
    const auto n = u.size();
    if (nu <= 0.0 || n == 0) {
        return u;
    }
    // Uniform in the real 2n-dimensional ball: Gaussian direction, radius
    // nu * U^(1/(2n)).
    CVec dir(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        dir(i) = cplx(rng.normal(), rng.normal());
    }
    const double norm = dir.norm();
    const double radius = nu * std::pow(rng.uniform(), 1.0 / (2.0 * static_cast<double>(n)));
    CVec du = dir * (radius / norm);
    // Rounding may push the norm a hair past nu.
    const double dn = du.norm();
    if (dn > nu) {
        du *= nu / dn;
    }
    return u + du;
}

Placement sample_placement(const ScenarioConfig& cfg, RngStream& rng) {
    auto in_disk = [](const Position2D& c, double r, RngStream& s) {
        const double rad = r * std::sqrt(s.uniform());
        const double ang = s.uniform(0.0, kTwoPi);
        return Position2D{c.x + rad * std::cos(ang), c.y + rad * std::sin(ang)};
    };
    Placement p;
    for (int k = 0; k < cfg.n_ihr; ++k) {
        RngStream s = rng.split("ihr-position", static_cast<std::uint64_t>(k));
        p.ihr.push_back(in_disk(cfg.ihr_center, cfg.ihr_radius, s));
    }
    for (int j = 0; j < cfg.n_uehr; ++j) {
        RngStream s = rng.split("uehr-position", static_cast<std::uint64_t>(j));
        p.uehr.push_back(in_disk(cfg.uehr_center, cfg.uehr_radius, s));
    }
    return p;
}

SmallScale sample_small_scale(const ScenarioConfig& cfg, RngStream& rng) {
    SmallScale s;
    {
        RngStream g = rng.split("bs-ris");
        s.bs_ris_nlos.resize(cfg.n_ris, cfg.n_tx);
        for (int n = 0; n < cfg.n_tx; ++n) {
            for (int m = 0; m < cfg.n_ris; ++m) {
                s.bs_ris_nlos(m, n) = g.complex_normal();
            }
        }
    }
    for (int k = 0; k < cfg.n_ihr; ++k) {
        RngStream g = rng.split("ris-ihr", static_cast<std::uint64_t>(k));
        s.ihr_nlos.push_back(complex_normal_vector(cfg.n_ris, g));
    }
    for (int j = 0; j < cfg.n_uehr; ++j) {
        RngStream g = rng.split("ris-uehr", static_cast<std::uint64_t>(j));
        s.uehr_nlos.push_back(complex_normal_vector(cfg.n_ris, g));
        RngStream d = rng.split("bs-uehr", static_cast<std::uint64_t>(j));
        s.direct_unit.push_back(complex_normal_vector(cfg.n_tx, d));
        RngStream e = rng.split("csi-error", static_cast<std::uint64_t>(j));
        s.csi_error.push_back(perturb_uehr_csi(CVec::Zero(cfg.n_tx), cfg.nu, e));
    }
    return s;
}

CVec reflection_vector(const Vec& theta) {
    CVec s(theta.size());
    for (Eigen::Index m = 0; m < theta.size(); ++m) {
        s(m) = std::polar(1.0, theta(m));
    }
    return s;
}

CVec reflect_to_bs(const CMat& bs_ris, const CVec& s, const CVec& x) {
    return bs_ris.adjoint() * (s.conjugate().cwiseProduct(x));
}

void update_channels(ChannelRealization& ch, const ScenarioConfig& cfg, const Position2D& q,
                     const Vec& theta) {
    const int m_el = cfg.n_ris;
    const int k_n = static_cast<int>(ch.placement.ihr.size());
    const int j_n = static_cast<int>(ch.placement.uehr.size());
    ch.q = q;
    ch.theta = theta;

    const double phi_br = safe_azimuth(cfg.bs, q);
    const CVec a_ris_br = steering_vector(m_el, phi_br);
    const CVec a_bs_br = steering_vector(cfg.n_tx, phi_br);
    const CMat los_bs = a_ris_br * a_bs_br.adjoint();
    if (cfg.k_bs_ris >= kLosOnly) {
        ch.bs_ris_tilde = los_bs;
    } else {
        ch.bs_ris_tilde = std::sqrt(cfg.k_bs_ris / (cfg.k_bs_ris + 1.0)) * los_bs +
                          std::sqrt(1.0 / (cfg.k_bs_ris + 1.0)) * ch.small.bs_ris_nlos;
    }
    ch.bs_ris = path_amplitude(cfg, distance3d(q, cfg.bs, cfg.height)) * ch.bs_ris_tilde;

    const CVec s = reflection_vector(theta);

    ch.ihr_tilde.resize(k_n);
    ch.ihr.resize(k_n);
    ch.cascaded_ihr.resize(cfg.n_tx, k_n);
    for (int k = 0; k < k_n; ++k) {
        const Position2D& w = ch.placement.ihr[k];
        const CVec los = steering_vector(m_el, safe_azimuth(q, w));
        ch.ihr_tilde[k] = rician_mix(cfg.k_ris_ihr, los, ch.small.ihr_nlos[k]);
        ch.ihr[k] = path_amplitude(cfg, distance3d(q, w, cfg.height)) * ch.ihr_tilde[k];
        ch.cascaded_ihr.col(k) = reflect_to_bs(ch.bs_ris, s, ch.ihr[k]);
    }

    ch.uehr_tilde.resize(j_n);
    ch.uehr.resize(j_n);
    ch.direct.resize(j_n);
    ch.cascaded_uehr.resize(j_n);
    ch.estimated_uehr.resize(j_n);
    for (int j = 0; j < j_n; ++j) {
        const Position2D& w = ch.placement.uehr[j];
        const CVec los = steering_vector(m_el, safe_azimuth(q, w));
        ch.uehr_tilde[j] = rician_mix(cfg.k_ris_uehr, los, ch.small.uehr_nlos[j]);
        ch.uehr[j] = path_amplitude(cfg, distance3d(q, w, cfg.height)) * ch.uehr_tilde[j];
        // Ground-to-ground link; clamp at 1 m so a UEHR on top of the BS
        // stays finite.
        const double d_bj = std::max(1.0, std::hypot(cfg.bs.x - w.x, cfg.bs.y - w.y));
        ch.direct[j] = path_amplitude(cfg, d_bj) * ch.small.direct_unit[j];
        ch.cascaded_uehr[j] = ch.direct[j] + reflect_to_bs(ch.bs_ris, s, ch.uehr[j]);
        ch.estimated_uehr[j] = ch.cascaded_uehr[j] + ch.small.csi_error[j];
    }
}

ChannelRealization compose_channels(const ScenarioConfig& cfg, const Placement& placement,
                                    const SmallScale& small, const Position2D& q, const Vec& theta) {
    if (theta.size() != cfg.n_ris) {
        throw DimensionMismatch("theta length must equal n_ris");
    }
    ChannelRealization ch;
    ch.placement = placement;
    ch.small = small;
    update_channels(ch, cfg, q, theta);
    return ch;
}

ChannelRealization sample_channels(const ScenarioConfig& cfg, const Placement& placement,
                                   const Position2D& q, const Vec& theta, RngStream& rng) {
    if (cfg.n_tx < cfg.n_ihr) {
        throw ConfigError("zero forcing needs n_tx >= n_ihr");
    }
    const SmallScale small = sample_small_scale(cfg, rng);
    return compose_channels(cfg, placement, small, q, theta);
}

// ---------------------------------------------------------------------------
// Fixture dumps

namespace {

constexpr std::array<char, 8> kMagic = {'W', 'C', 'S', 'E', 'E', 'C', 'H', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
    std::array<unsigned char, 4> b{};
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xffu);
    out.write(reinterpret_cast<const char*>(b.data()), 4);
}

void put_f64(std::ostream& out, double v) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof bits);
    std::array<unsigned char, 8> b{};
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xffu);
    out.write(reinterpret_cast<const char*>(b.data()), 8);
}

void put_c(std::ostream& out, cplx c) {
    put_f64(out, c.real());
    put_f64(out, c.imag());
}

std::uint32_t get_u32(std::istream& in) {
    std::array<unsigned char, 4> b{};
    if (!in.read(reinterpret_cast<char*>(b.data()), 4)) throw ParseError("truncated channel dump");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

double get_f64(std::istream& in) {
    std::array<unsigned char, 8> b{};
    if (!in.read(reinterpret_cast<char*>(b.data()), 8)) throw ParseError("truncated channel dump");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v = 0.0;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

cplx get_c(std::istream& in) {
    const double re = get_f64(in);
    const double im = get_f64(in);
    return {re, im};
}

void put_mat(std::ostream& out, const CMat& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r) put_c(out, m(r, c));
}

CMat get_mat(std::istream& in, Eigen::Index rows, Eigen::Index cols) {
    CMat m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = get_c(in);
    return m;
}

void put_vecs(std::ostream& out, const std::vector<CVec>& vs) {
    for (const auto& v : vs)
        for (Eigen::Index i = 0; i < v.size(); ++i) put_c(out, v(i));
}

std::vector<CVec> get_vecs(std::istream& in, std::size_t count, Eigen::Index len) {
    std::vector<CVec> vs(count, CVec(len));
    for (auto& v : vs)
        for (Eigen::Index i = 0; i < len; ++i) v(i) = get_c(in);
    return vs;
}

void csv_mat(std::ostream& out, const std::string& name, const CMat& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            out << name << ',' << r << ',' << c << ',' << m(r, c).real() << ',' << m(r, c).imag() << '\n';
}

void csv_vecs(std::ostream& out, const std::string& name, const std::vector<CVec>& vs) {
    for (std::size_t c = 0; c < vs.size(); ++c)
        for (Eigen::Index r = 0; r < vs[c].size(); ++r)
            out << name << ',' << r << ',' << c << ',' << vs[c](r).real() << ',' << vs[c](r).imag() << '\n';
}

}  // namespace

void write_channels_binary(std::ostream& out, const ChannelRealization& ch) {
    out.write(kMagic.data(), kMagic.size());
    put_u32(out, static_cast<std::uint32_t>(ch.n_ris()));
    put_u32(out, static_cast<std::uint32_t>(ch.n_tx()));
    put_u32(out, static_cast<std::uint32_t>(ch.n_ihr()));
    put_u32(out, static_cast<std::uint32_t>(ch.n_uehr()));
    put_mat(out, ch.bs_ris);
    put_vecs(out, ch.ihr);
    put_vecs(out, ch.uehr);
    put_vecs(out, ch.direct);
    put_mat(out, ch.cascaded_ihr);
    put_vecs(out, ch.cascaded_uehr);
    put_vecs(out, ch.estimated_uehr);
}

ChannelDump read_channels_binary(std::istream& in) {
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
        throw ParseError("not a channel dump (bad magic)");
    }
    const auto m = static_cast<Eigen::Index>(get_u32(in));
    const auto nt = static_cast<Eigen::Index>(get_u32(in));
    const auto k = static_cast<std::size_t>(get_u32(in));
    const auto j = static_cast<std::size_t>(get_u32(in));
    ChannelDump d;
    d.bs_ris = get_mat(in, m, nt);
    d.ihr = get_vecs(in, k, m);
    d.uehr = get_vecs(in, j, m);
    d.direct = get_vecs(in, j, nt);
    d.cascaded_ihr = get_mat(in, nt, static_cast<Eigen::Index>(k));
    d.cascaded_uehr = get_vecs(in, j, nt);
    d.estimated_uehr = get_vecs(in, j, nt);
    return d;
}

void write_channels_csv(std::ostream& out, const ChannelRealization& ch) {
    const auto old_prec = out.precision(17);
    out << "quantity,row,col,re,im\n";
    csv_mat(out, "G_b", ch.bs_ris);
    csv_vecs(out, "g", ch.ihr);
    csv_vecs(out, "h", ch.uehr);
    csv_vecs(out, "h_b", ch.direct);
    csv_mat(out, "H_c", ch.cascaded_ihr);
    csv_vecs(out, "u", ch.cascaded_uehr);
    csv_vecs(out, "u_hat", ch.estimated_uehr);
    out.precision(old_prec);
}

}  // namespace wcsee
