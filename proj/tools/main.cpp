// fsph — command-line workbench over the fuzzy circle / fuzzy sphere library.
//
// Subcommands:
//   verify        residuals of every defining algebra relation, per Λ
//   localization  dispersion bounds vs. the rigid-sphere reference, per Λ
//   resolution    resolution-of-identity residuals (incl. a deliberately
//                 under-resolved row and optional user-supplied seed states)
//   spectrum      position-operator spectra: structure flags and eigenvalue
//                 bounds (circle x₁ blocks / sphere B_m blocks)
//   ur-audit      uncertainty-relation slacks over random and coherent states
//
// Reports are emitted as JSON {meta, results:[{name,value,bound,pass}]} or as
// CSV; file writes go through a temp file + atomic rename so no partial
// report is ever left behind. Exit codes: 0 every check passed, 1 at least
// one violation (the worst offender is named on stderr), 2 configuration
// error.
//
// Per-Λ work items run in parallel; the report is assembled single-threaded
// in Λ order, so output is deterministic for a fixed seed.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fsph/circle.hpp"
#include "fsph/random.hpp"
#include "fsph/rotation.hpp"
#include "fsph/sphere.hpp"
#include "fsph/su2.hpp"

namespace {

using nlohmann::ordered_json;
using namespace fsph;

constexpr double pi = std::numbers::pi;

enum class Space { circle, sphere };
enum class KPolicy { min_kineq, lambda6, explicit_k };
enum class Format { json, csv };

struct RunConfig {
    Space space = Space::circle;
    int lambda_min = 1;
    int lambda_max = 6;
    KPolicy k_policy = KPolicy::min_kineq;
    double k_value = 0.0;
    double tol = 1e-11;
    std::uint64_t seed = 12345;
    Format format = Format::json;
    std::string out;  // empty → stdout
    std::size_t nodes_phi = 0, nodes_theta = 0, nodes_psi = 0;  // 0 → 2Λ+2
    std::string amplitudes;
};

// One report line. `pass` is authoritative; `bound` is the threshold the
// check compared against (the direction — at-most / at-least / equals — is
// part of the check, named in `name`).
struct Row {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    bool pass = true;
};

struct LambdaResult {
    int lambda = 0;
    double k = 0.0;
    std::vector<Row> rows;
    std::string csv_line;  // used by subcommands with a custom CSV layout
};

double stiffness_for(const RunConfig& cfg, int lambda) {
    const double kmin = cfg.space == Space::circle
                            ? circle_min_stiffness(lambda)
                            : sphere_min_stiffness(lambda);
    switch (cfg.k_policy) {
        case KPolicy::min_kineq:
            return kmin;
        case KPolicy::lambda6:
            return std::max(std::pow(static_cast<double>(lambda), 6.0), kmin);
        case KPolicy::explicit_k:
            return cfg.k_value;
    }
    return kmin;
}

std::mt19937_64 rng_for(const RunConfig& cfg, int lambda) {
    return std::mt19937_64(cfg.seed +
                           static_cast<std::uint64_t>(lambda) *
                               0x9E3779B97F4A7C15ULL);
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Row at_most(std::string name, double value, double bound) {
    return {std::move(name), value, bound, value <= bound};
}
Row at_least(std::string name, double value, double bound) {
    return {std::move(name), value, bound, value >= bound};
}
Row strictly_below(std::string name, double value, double bound) {
    return {std::move(name), value, bound, value < bound};
}
Row strictly_above(std::string name, double value, double bound) {
    return {std::move(name), value, bound, value > bound};
}
Row equals_within(std::string name, double value, double target, double tol) {
    return {std::move(name), value, target, std::abs(value - target) <= tol};
}
Row flag(std::string name, bool ok) {
    return {std::move(name), ok ? 1.0 : 0.0, 1.0, ok};
}

std::string tag(int lambda, const std::string& name) {
    return "lambda=" + std::to_string(lambda) + "/" + name;
}

// ---------------------------------------------------------------------------
// Amplitude files: one basis label + complex amplitude per line,
//   circle: `n re im`        sphere: `l m re im`
// '#' starts a comment; blank lines are skipped. Labels must be unique and
// the amplitudes must not all vanish. Range against Λ is checked per sweep
// point: a file whose labels exceed a given Λ simply does not apply there.
struct AmpRecord {
    int a = 0, b = 0;  // circle: a = n; sphere: a = l, b = m
    double re = 0.0, im = 0.0;
};

std::optional<std::vector<AmpRecord>> parse_amplitude_file(
    const std::string& path, Space space, std::string& err) {
    std::ifstream in(path);
    if (!in) {
        err = "cannot open amplitude file: " + path;
        return std::nullopt;
    }
    std::vector<AmpRecord> recs;
    std::set<std::pair<int, int>> seen;
    std::string line;
    std::size_t lineno = 0;
    double norm_sq = 0.0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ss(line);
        AmpRecord r;
        if (space == Space::circle) {
            if (!(ss >> r.a)) {
                std::string rest;
                if (ss.clear(), ss >> rest) {
                    err = "line " + std::to_string(lineno) + ": expected `n re im`";
                    return std::nullopt;
                }
                continue;  // blank / comment-only line
            }
            if (!(ss >> r.re >> r.im)) {
                err = "line " + std::to_string(lineno) + ": expected `n re im`";
                return std::nullopt;
            }
        } else {
            if (!(ss >> r.a)) {
                std::string rest;
                if (ss.clear(), ss >> rest) {
                    err = "line " + std::to_string(lineno) +
                          ": expected `l m re im`";
                    return std::nullopt;
                }
                continue;
            }
            if (!(ss >> r.b >> r.re >> r.im)) {
                err = "line " + std::to_string(lineno) + ": expected `l m re im`";
                return std::nullopt;
            }
            if (r.a < 0 || std::abs(r.b) > r.a) {
                err = "line " + std::to_string(lineno) + ": label (l=" +
                      std::to_string(r.a) + ", m=" + std::to_string(r.b) +
                      ") is not a valid basis label";
                return std::nullopt;
            }
        }
        std::string rest;
        if (ss >> rest) {
            err = "line " + std::to_string(lineno) + ": trailing tokens";
            return std::nullopt;
        }
        if (!seen.insert({r.a, r.b}).second) {
            err = "line " + std::to_string(lineno) + ": duplicate basis label";
            return std::nullopt;
        }
        norm_sq += r.re * r.re + r.im * r.im;
        recs.push_back(r);
    }
    if (recs.empty() || norm_sq == 0.0) {
        err = "amplitude file defines the zero state";
        return std::nullopt;
    }
    return recs;
}

std::optional<StateVector> embed_circle(const std::vector<AmpRecord>& recs,
                                        const FuzzyCircleSpace& s) {
    StateVector v(s.dim);
    for (const auto& r : recs) {
        if (std::abs(r.a) > s.Lambda) return std::nullopt;
        v.amp[s.idx(r.a)] = cplx(r.re, r.im);
    }
    v.normalize();
    return v;
}

std::optional<StateVector> embed_sphere(const std::vector<AmpRecord>& recs,
                                        const FuzzySphereSpace& s) {
    StateVector v(s.dim);
    for (const auto& r : recs) {
        if (r.a > s.Lambda) return std::nullopt;
        v.amp[s.idx(r.a, r.b)] = cplx(r.re, r.im);
    }
    v.normalize();
    return v;
}

// ---------------------------------------------------------------------------
// verify: every defining relation's residual against --tol.

LambdaResult run_verify(const RunConfig& cfg, int lambda) {
    LambdaResult lr;
    lr.lambda = lambda;
    lr.k = stiffness_for(cfg, lambda);
    auto& rows = lr.rows;
    if (cfg.space == Space::circle) {
        const FuzzyCircleSpace s = build_circle(lambda, lr.k);
        const CircleAlgebraReport r = verify_circle_algebra(s);
        rows.push_back(at_most(tag(lambda, "hermiticity"), r.hermiticity, cfg.tol));
        rows.push_back(at_most(tag(lambda, "ladder_comm"), r.ladder_comm, cfg.tol));
        rows.push_back(
            at_most(tag(lambda, "ladder_exchange"), r.ladder_exchange, cfg.tol));
        rows.push_back(at_most(tag(lambda, "x_sq_closed_form"),
                               r.x_sq_closed_form, cfg.tol));
        rows.push_back(
            at_most(tag(lambda, "cartesian_comm"), r.cartesian_comm, cfg.tol));
        rows.push_back(at_most(tag(lambda, "min_poly_L"), r.min_poly_L, cfg.tol));
        rows.push_back(at_most(tag(lambda, "nilpotency"), r.nilpotency, cfg.tol));
        rows.push_back(at_most(tag(lambda, "su2_squeeze_factorization"),
                               circle_su2_check(s), cfg.tol));
    } else {
        const FuzzySphereSpace s = build_sphere(lambda, lr.k);
        const SphereAlgebraReport r = verify_sphere_algebra(s);
        rows.push_back(at_most(tag(lambda, "hermiticity"), r.hermiticity, cfg.tol));
        rows.push_back(at_most(tag(lambda, "L_brackets"), r.L_brackets, cfg.tol));
        rows.push_back(at_most(tag(lambda, "Lx_brackets"), r.Lx_brackets, cfg.tol));
        rows.push_back(at_most(tag(lambda, "x_dot_L"), r.x_dot_L, cfg.tol));
        rows.push_back(at_most(tag(lambda, "casimir_assembly"),
                               r.casimir_assembly, cfg.tol));
        rows.push_back(at_most(tag(lambda, "xx_brackets"), r.xx_brackets, cfg.tol));
        rows.push_back(at_most(tag(lambda, "x_sq_closed_form"),
                               r.x_sq_closed_form, cfg.tol));
        rows.push_back(
            at_most(tag(lambda, "min_poly_L_sq"), r.min_poly_L_sq, cfg.tol));
        rows.push_back(at_most(tag(lambda, "min_poly_L3"), r.min_poly_L3, cfg.tol));
        rows.push_back(at_most(tag(lambda, "nilpotency"), r.nilpotency, cfg.tol));
    }
    for (const auto& row : rows) {
        std::string line = row.name + "," + fmt17(row.value) + "," +
                           fmt17(row.bound) + "," + (row.pass ? "true" : "false");
        lr.csv_line += line + "\n";
    }
    return lr;
}

// ---------------------------------------------------------------------------
// localization: fixed-column CSV per Λ.
//   circle: lambda,k,toeplitz_disp,toeplitz_bound,scs_disp,scs_bound,
//           lambda1_exact_min,toeplitz_ok,scs_ok,lambda1_min_ok
//   sphere: lambda,k,madore_min,phi_scs_disp,chi_tilde_disp,phi_bound,
//           chi_two_term_bound,chi_madore_bound,phi_ok,chi_two_term_ok,
//           chi_madore_ok
// Cells are empty where the bound has no claim at that Λ (circle SCS needs
// Λ ≥ 2, the sine-profile two-term bound needs Λ ≥ 3).

LambdaResult run_localization(const RunConfig& cfg, int lambda) {
    LambdaResult lr;
    lr.lambda = lambda;
    lr.k = stiffness_for(cfg, lambda);
    auto& rows = lr.rows;
    std::string line = std::to_string(lambda) + "," + fmt17(lr.k);
    const double lp1 = lambda + 1.0;
    if (cfg.space == Space::circle) {
        const FuzzyCircleSpace s = build_circle(lambda, lr.k);
        const CircleX1Analysis x1 = circle_x1_analysis(s);
        const double toeplitz_bound = 3.5 / (lp1 * lp1);
        const Row toep = strictly_below(tag(lambda, "toeplitz_disp"),
                                        x1.disp_cosine, toeplitz_bound);
        rows.push_back(toep);
        line += "," + fmt17(toep.value) + "," + fmt17(toep.bound);

        std::string scs_cells = ",,", scs_ok = ",";
        if (lambda >= 2) {
            const CircleSCSReport scs = circle_scs_audit(
                s, 0.0, std::vector<double>(s.dim, 0.0));
            const Row r = strictly_below(tag(lambda, "scs_disp"), scs.disp_x,
                                         2.0 / (3.0 * lp1));
            rows.push_back(r);
            scs_cells = "," + fmt17(r.value) + "," + fmt17(r.bound);
            scs_ok = std::string(",") + (r.pass ? "true" : "false");
        }
        line += scs_cells;

        std::string min_cell = ",", min_ok = ",";
        if (lambda == 1) {
            const CircleMinimizerReport m = circle_lambda1_minimizer(lr.k);
            const Row r = equals_within(tag(lambda, "minimizer_disp"),
                                        m.disp_min, 7.0 / 32.0, 1e-12);
            rows.push_back(r);
            min_cell = "," + fmt17(r.value);
            min_ok = std::string(",") + (r.pass ? "true" : "false");
        }
        line += min_cell;
        line += std::string(",") + (toep.pass ? "true" : "false");
        line += scs_ok;
        line += min_ok;
    } else {
        const FuzzySphereSpace s = build_sphere(lambda, lr.k);
        const double madore = madore_min_dispersion(lambda);
        rows.push_back(strictly_above(tag(lambda, "madore_min_dispersion"),
                                      madore, 0.0));
        const SphereSCSReport phi = sphere_scs_family(
            s, SphereSCSKind::Phi,
            std::vector<double>(static_cast<std::size_t>(lambda) + 1, 0.0));
        const Row phi_row =
            strictly_below(tag(lambda, "phi_scs_disp"), phi.disp_x, 1.0 / lp1);
        rows.push_back(phi_row);

        std::string chi_val = ",", chi_bounds = ",,", chi_oks = ",,";
        if (lambda >= 3) {
            const ChiTildeReport chi = sphere_chi_tilde(s);
            const Row two = strictly_below(tag(lambda, "chi_tilde_disp"),
                                           chi.disp_x, chi.bound_two_term);
            const Row ref = strictly_below(tag(lambda, "chi_tilde_vs_madore"),
                                           chi.disp_x, madore);
            rows.push_back(two);
            rows.push_back(ref);
            chi_val = "," + fmt17(chi.disp_x);
            chi_bounds = "," + fmt17(two.bound) + "," + fmt17(ref.bound);
            chi_oks = std::string(",") + (two.pass ? "true" : "false") + "," +
                      (ref.pass ? "true" : "false");
        }
        line += "," + fmt17(madore);
        line += "," + fmt17(phi_row.value);
        line += chi_val;
        line += "," + fmt17(phi_row.bound);
        line += chi_bounds.empty() ? ",," : chi_bounds;
        line += std::string(",") + (phi_row.pass ? "true" : "false");
        line += chi_oks;
    }
    lr.csv_line = line + "\n";
    return lr;
}

// ---------------------------------------------------------------------------
// resolution: identity residuals per family and per quadrature resolution,
// plus a deliberately under-resolved row (pass = the aliasing IS visible) and
// optional user-seed diagnostics.

LambdaResult run_resolution(const RunConfig& cfg, int lambda,
                            const std::vector<AmpRecord>* user) {
    LambdaResult lr;
    lr.lambda = lambda;
    lr.k = stiffness_for(cfg, lambda);
    auto& rows = lr.rows;
    std::mt19937_64 rng = rng_for(cfg, lambda);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);

    if (cfg.space == Space::circle) {
        const FuzzyCircleSpace s = build_circle(lambda, lr.k);
        const std::size_t m_nodes =
            cfg.nodes_phi ? cfg.nodes_phi
                          : static_cast<std::size_t>(2 * lambda + 2);
        const std::vector<double> zero(s.dim, 0.0);
        std::vector<double> betas(s.dim);
        for (auto& b : betas) b = angle(rng);

        rows.push_back(at_most(
            tag(lambda, "omega_uniform_residual"),
            circle_resolution_check(s, m_nodes, circle_scs_omega(s, 0.0, zero))
                .max_identity_residual,
            cfg.tol));
        rows.push_back(at_most(
            tag(lambda, "omega_random_beta_residual"),
            circle_resolution_check(s, m_nodes,
                                    circle_scs_omega(s, angle(rng), betas))
                .max_identity_residual,
            cfg.tol));
        // M = 2Λ < 2Λ+1 aliases: the pass condition is that the residual is
        // clearly visible, demonstrating the exactness threshold is sharp.
        rows.push_back(strictly_above(
            tag(lambda, "omega_underresolved_residual"),
            circle_resolution_check(s, static_cast<std::size_t>(2 * lambda),
                                    circle_scs_omega(s, 0.0, zero))
                .max_identity_residual,
            cfg.tol));

        if (user) {
            const std::optional<StateVector> v = embed_circle(*user, s);
            if (v) {
                const ResolutionReport rep =
                    circle_resolution_check(s, m_nodes, *v);
                rows.push_back(at_most(tag(lambda, "user_residual"),
                                       rep.max_identity_residual, cfg.tol));
                if (!rep.exact) {
                    // Orbit average is diagonal (2Λ+1)|ω_n|²; report the
                    // per-label profile so the uniform-modulus precondition
                    // violation is visible.
                    for (int n = -lambda; n <= lambda; ++n)
                        rows.push_back(equals_within(
                            tag(lambda,
                                "user_profile_n=" + std::to_string(n)),
                            rep.diagonal_profile[s.idx(n)], 1.0, cfg.tol));
                }
            }
        }
    } else {
        const FuzzySphereSpace s = build_sphere(lambda, lr.k);
        const std::size_t def = static_cast<std::size_t>(2 * lambda + 2);
        const std::size_t m_phi = cfg.nodes_phi ? cfg.nodes_phi : def;
        const std::size_t n_theta = cfg.nodes_theta ? cfg.nodes_theta : def;
        const std::size_t m_psi = cfg.nodes_psi ? cfg.nodes_psi : def;
        const std::vector<double> zero(static_cast<std::size_t>(lambda) + 1,
                                       0.0);

        const SphereSCSReport om =
            sphere_scs_family(s, SphereSCSKind::Omega, zero);
        const ResolutionReport om_rep =
            sphere_resolution_check(s, om.state, m_phi, n_theta, m_psi);
        rows.push_back(at_most(tag(lambda, "omega_family_residual"),
                               om_rep.max_identity_residual, cfg.tol));

        // Normalization constant of the group average, recovered from the
        // mean diagonal: exact value 8π²/(Λ+1)².
        const double c_exact = 8.0 * pi * pi / ((lambda + 1.0) * (lambda + 1.0));
        double mean = 0.0;
        for (double d : om_rep.diagonal_profile) mean += d;
        mean /= static_cast<double>(om_rep.diagonal_profile.size());
        rows.push_back(at_most(tag(lambda, "constant_recovery_defect"),
                               std::abs(c_exact * mean - c_exact),
                               std::max(cfg.tol, 1e-10)));

        const SphereSCSReport ph = sphere_scs_family(s, SphereSCSKind::Phi, zero);
        rows.push_back(at_most(
            tag(lambda, "phi_family_residual"),
            sphere_resolution_check(s, ph.state, m_phi, n_theta, m_psi)
                .max_identity_residual,
            cfg.tol));
        rows.push_back(at_most(
            tag(lambda, "phi_coset_residual"),
            sphere_coset_resolution_check(s, ph.state, m_phi, n_theta)
                .max_identity_residual,
            cfg.tol));
        rows.push_back(strictly_above(
            tag(lambda, "omega_underresolved_residual"),
            sphere_resolution_check(
                s, om.state, m_phi,
                std::max<std::size_t>(1, static_cast<std::size_t>(lambda) / 2),
                m_psi)
                .max_identity_residual,
            cfg.tol));

        if (user) {
            const std::optional<StateVector> v = embed_sphere(*user, s);
            if (v) {
                const ResolutionReport rep =
                    sphere_resolution_check(s, *v, m_phi, n_theta, m_psi);
                rows.push_back(at_most(tag(lambda, "user_residual"),
                                       rep.max_identity_residual, cfg.tol));
                if (!rep.exact) {
                    // The group average is block-scalar; per-level weights
                    // (Λ+1)²‖ω_l‖²/(2l+1) diagnose which levels break the
                    // norm precondition (target 1 on every level).
                    for (int l = 0; l <= lambda; ++l) {
                        double level = 0.0;
                        for (int m = -l; m <= l; ++m)
                            level += rep.diagonal_profile[s.idx(l, m)];
                        level /= (2.0 * l + 1.0);
                        rows.push_back(equals_within(
                            tag(lambda,
                                "user_profile_l=" + std::to_string(l)),
                            level, 1.0, cfg.tol));
                    }
                }
            }
        }
    }
    for (const auto& row : rows)
        lr.csv_line += row.name + "," + fmt17(row.value) + "," +
                       fmt17(row.bound) + "," + (row.pass ? "true" : "false") +
                       "\n";
    return lr;
}

// ---------------------------------------------------------------------------
// spectrum: structural flags and eigenvalue bounds of the position blocks.

LambdaResult run_spectrum(const RunConfig& cfg, int lambda) {
    LambdaResult lr;
    lr.lambda = lambda;
    lr.k = stiffness_for(cfg, lambda);
    auto& rows = lr.rows;
    if (cfg.space == Space::circle) {
        const FuzzyCircleSpace s = build_circle(lambda, lr.k);
        const CircleX1Analysis a = circle_x1_analysis(s);
        rows.push_back(at_most(tag(lambda, "x1_eigen_residual"),
                               a.spectrum.max_residual, cfg.tol));
        rows.push_back(flag(tag(lambda, "x1_symmetric_spectrum"),
                            a.spectrum.symmetric_spectrum));
        rows.push_back(flag(tag(lambda, "x1_spectrum_simple"), a.spectrum.simple));
        // At Λ = 1 the top eigenvalue equals cos(π/4) exactly (the ladder
        // coefficients b₀ = b₁ = 1 are k-independent), so the bound is met
        // with equality — compare with the run tolerance, not strictly.
        rows.push_back(at_least(tag(lambda, "x1_top_eigenvalue"),
                                a.top_eigenvalue,
                                std::cos(pi / (2.0 * lambda + 2.0)) - cfg.tol));
        rows.push_back(strictly_below(tag(lambda, "cosine_state_disp"),
                                      a.disp_cosine,
                                      3.5 / ((lambda + 1.0) * (lambda + 1.0))));
        if (lambda >= 2) {
            // The Λ−1 block is a principal submatrix (two rows deleted) of
            // the Λ block at the SAME stiffness: Cauchy interlacing.
            const FuzzyCircleSpace inner = build_circle(lambda - 1, lr.k);
            const CircleX1Analysis ai = circle_x1_analysis(inner);
            std::vector<double> outer_v, inner_v;
            for (const auto& z : a.spectrum.values) outer_v.push_back(z.real());
            for (const auto& z : ai.spectrum.values) inner_v.push_back(z.real());
            std::sort(outer_v.begin(), outer_v.end());
            std::sort(inner_v.begin(), inner_v.end());
            rows.push_back(flag(tag(lambda, "x1_interlacing"),
                                spectra_interlace(outer_v, inner_v)));
        }
    } else {
        bool all_sym = true, all_simple = true;
        double max_resid = 0.0, prev_alpha1 = 1e300;
        bool chain_ok = true;
        for (int m = 0; m <= lambda; ++m) {
            const SpectrumReport rep = sphere_Bm_analysis(lambda, lr.k, m);
            all_sym = all_sym && rep.symmetric_spectrum;
            all_simple = all_simple && rep.simple;
            max_resid = std::max(max_resid, rep.max_residual);
            double top = -1e300;
            for (const auto& z : rep.values) top = std::max(top, z.real());
            if (m == 0)
                rows.push_back(strictly_above(tag(lambda, "alpha1_m=0"), top,
                                              std::cos(pi / (lambda + 2.0))));
            else
                rows.push_back(
                    strictly_below(tag(lambda, "alpha1_m=" + std::to_string(m)),
                                   top, prev_alpha1));
            chain_ok = chain_ok && top < prev_alpha1;
            prev_alpha1 = top;
        }
        rows.push_back(at_most(tag(lambda, "Bm_eigen_residual"), max_resid,
                               std::max(cfg.tol, 1e-12)));
        rows.push_back(flag(tag(lambda, "Bm_symmetric_spectra"), all_sym));
        rows.push_back(flag(tag(lambda, "Bm_spectra_simple"), all_simple));
        rows.push_back(flag(tag(lambda, "alpha1_chain_decreasing"), chain_ok));
        if (lambda >= 2) {
            // Monotone growth of the top eigenvalue with the cutoff under
            // the high-stiffness policy k = Λ⁶.
            auto alpha1_at = [](int lam) {
                const double k6 =
                    std::max(std::pow(static_cast<double>(lam), 6.0),
                             sphere_min_stiffness(lam));
                const SpectrumReport rep = sphere_Bm_analysis(lam, k6, 0);
                double top = -1e300;
                for (const auto& z : rep.values) top = std::max(top, z.real());
                return top;
            };
            rows.push_back(flag(tag(lambda, "alpha1_lambda6_monotone"),
                                alpha1_at(lambda) > alpha1_at(lambda - 1)));
        }
    }
    for (const auto& row : rows)
        lr.csv_line += row.name + "," + fmt17(row.value) + "," +
                       fmt17(row.bound) + "," + (row.pass ? "true" : "false") +
                       "\n";
    return lr;
}

// ---------------------------------------------------------------------------
// ur-audit: minimum uncertainty-relation slacks over random states plus the
// coherent families (whose large position means exercise the centered
// covariance term), and the closed-form cross-check of <L'>.

LambdaResult run_ur_audit(const RunConfig& cfg, int lambda,
                          const std::vector<AmpRecord>* user) {
    LambdaResult lr;
    lr.lambda = lambda;
    lr.k = stiffness_for(cfg, lambda);
    auto& rows = lr.rows;
    std::mt19937_64 rng = rng_for(cfg, lambda);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n_random = 300;

    if (cfg.space == Space::circle) {
        const FuzzyCircleSpace s = build_circle(lambda, lr.k);
        std::vector<StateVector> sample;
        for (int i = 0; i < n_random; ++i)
            sample.push_back(random_state(s.dim, rng));
        for (double alpha : {0.0, 0.7, 1.3, 2.1, pi, 4.4, 5.5}) {
            std::vector<double> zero(s.dim, 0.0), sym(s.dim), asym(s.dim);
            for (int m = 0; m <= lambda; ++m) {
                const double b = angle(rng);
                sym[s.idx(m)] = b;
                sym[s.idx(-m)] = b;
            }
            for (auto& b : asym) b = angle(rng);
            sample.push_back(circle_scs_omega(s, alpha, zero));
            sample.push_back(circle_scs_omega(s, alpha, sym));
            sample.push_back(circle_scs_omega(s, alpha, asym));
        }
        double min_h1 = 1e300, min_h2 = 1e300, min_ht = 1e300, min_rob = 1e300,
               min_sm = 1e300, min_all = 1e300, max_defect = 0.0;
        for (const auto& v : sample) {
            const CircleURAudit a = circle_ur_audit(s, v);
            min_h1 = std::min(min_h1, a.heis_x1_slack);
            min_h2 = std::min(min_h2, a.heis_x2_slack);
            min_ht = std::min(min_ht, a.heis_total_slack);
            min_rob = std::min(min_rob, a.robertson_slack);
            min_sm = std::min(min_sm, a.second_moment_slack);
            min_all = std::min(min_all, a.min_slack);
            max_defect = std::max(
                max_defect, std::abs(a.mean_L_prime - a.mean_L_prime_closed));
        }
        rows.push_back(at_least(tag(lambda, "min_heis_x1_slack"), min_h1, -cfg.tol));
        rows.push_back(at_least(tag(lambda, "min_heis_x2_slack"), min_h2, -cfg.tol));
        rows.push_back(
            at_least(tag(lambda, "min_heis_total_slack"), min_ht, -cfg.tol));
        rows.push_back(
            at_least(tag(lambda, "min_robertson_slack"), min_rob, -cfg.tol));
        rows.push_back(
            at_least(tag(lambda, "min_second_moment_slack"), min_sm, -cfg.tol));
        rows.push_back(at_least(tag(lambda, "min_overall_slack"), min_all, -cfg.tol));
        rows.push_back(at_most(tag(lambda, "L_prime_closed_form_defect"),
                               max_defect, cfg.tol));
        if (user) {
            if (const std::optional<StateVector> v = embed_circle(*user, s)) {
                const CircleURAudit a = circle_ur_audit(s, *v);
                rows.push_back(at_least(tag(lambda, "user_min_slack"),
                                        a.min_slack, -cfg.tol));
                rows.push_back(at_least(tag(lambda, "user_robertson_slack"),
                                        a.robertson_slack, -cfg.tol));
                rows.push_back(
                    at_most(tag(lambda, "user_L_prime_defect"),
                            std::abs(a.mean_L_prime - a.mean_L_prime_closed),
                            cfg.tol));
            }
        }
    } else {
        const FuzzySphereSpace s = build_sphere(lambda, lr.k);
        std::vector<StateVector> sample;
        for (int i = 0; i < n_random; ++i)
            sample.push_back(random_state(s.dim, rng));
        const std::vector<double> zero(static_cast<std::size_t>(lambda) + 1, 0.0);
        std::vector<double> betas(zero.size());
        for (auto& b : betas) b = angle(rng);
        sample.push_back(sphere_scs_family(s, SphereSCSKind::Omega, zero).state);
        sample.push_back(sphere_scs_family(s, SphereSCSKind::Omega, betas).state);
        sample.push_back(sphere_scs_family(s, SphereSCSKind::Phi, zero).state);
        sample.push_back(sphere_scs_family(s, SphereSCSKind::Phi, betas).state);
        for (int i = 0; i < 8; ++i) {
            const EulerAngles g{angle(rng), std::acos(1.0 - 2.0 * unit(rng)),
                                angle(rng)};
            sample.push_back(
                sphere_scs_family(s, SphereSCSKind::Omega, zero, g).state);
        }
        double min_ll = 1e300, min_lx = 1e300, min_rob = 1e300, min_sm = 1e300,
               min_inv = 1e300, min_all = 1e300, max_defect = 0.0;
        for (const auto& v : sample) {
            const SphereURAudit a = sphere_ur_audit(s, v);
            min_ll = std::min(min_ll, a.LL_min_slack);
            min_lx = std::min(min_lx, a.Lx_min_slack);
            min_rob = std::min(min_rob, a.robertson_min_slack);
            min_sm = std::min(min_sm, a.second_moment_min_slack);
            min_inv = std::min(min_inv, a.invariant_slack);
            min_all = std::min(min_all, a.min_slack);
            max_defect = std::max(
                max_defect, std::abs(a.mean_L3_prime - a.mean_L3_prime_closed));
        }
        rows.push_back(at_least(tag(lambda, "min_LL_slack"), min_ll, -cfg.tol));
        rows.push_back(at_least(tag(lambda, "min_Lx_slack"), min_lx, -cfg.tol));
        rows.push_back(
            at_least(tag(lambda, "min_robertson_slack"), min_rob, -cfg.tol));
        rows.push_back(
            at_least(tag(lambda, "min_second_moment_slack"), min_sm, -cfg.tol));
        rows.push_back(
            at_least(tag(lambda, "min_invariant_slack"), min_inv, -cfg.tol));
        rows.push_back(at_least(tag(lambda, "min_overall_slack"), min_all, -cfg.tol));
        rows.push_back(at_most(tag(lambda, "L3_prime_closed_form_defect"),
                               max_defect, cfg.tol));
        if (user) {
            if (const std::optional<StateVector> v = embed_sphere(*user, s)) {
                const SphereURAudit a = sphere_ur_audit(s, *v);
                rows.push_back(at_least(tag(lambda, "user_min_slack"),
                                        a.min_slack, -cfg.tol));
                rows.push_back(at_least(tag(lambda, "user_invariant_slack"),
                                        a.invariant_slack, -cfg.tol));
                rows.push_back(
                    at_most(tag(lambda, "user_L3_prime_defect"),
                            std::abs(a.mean_L3_prime - a.mean_L3_prime_closed),
                            cfg.tol));
            }
        }
    }
    for (const auto& row : rows)
        lr.csv_line += row.name + "," + fmt17(row.value) + "," +
                       fmt17(row.bound) + "," + (row.pass ? "true" : "false") +
                       "\n";
    return lr;
}

// ---------------------------------------------------------------------------
// Report assembly and atomic emission.

std::string localization_header(Space space) {
    if (space == Space::circle)
        return "lambda,k,toeplitz_disp,toeplitz_bound,scs_disp,scs_bound,"
               "lambda1_exact_min,toeplitz_ok,scs_ok,lambda1_min_ok\n";
    return "lambda,k,madore_min,phi_scs_disp,chi_tilde_disp,phi_bound,"
           "chi_two_term_bound,chi_madore_bound,phi_ok,chi_two_term_ok,"
           "chi_madore_ok\n";
}

std::string render_report(const RunConfig& cfg, const std::string& subcommand,
                          const std::vector<LambdaResult>& results) {
    if (cfg.format == Format::json) {
        ordered_json meta;
        meta["subcommand"] = subcommand;
        meta["space"] = cfg.space == Space::circle ? "circle" : "sphere";
        meta["lambda"] = {{"min", cfg.lambda_min}, {"max", cfg.lambda_max}};
        ordered_json ks = ordered_json::array();
        for (const auto& lr : results) ks.push_back(lr.k);
        meta["k"] = ks;
        meta["k_policy"] = cfg.k_policy == KPolicy::min_kineq ? "min_kineq"
                           : cfg.k_policy == KPolicy::lambda6 ? "lambda6"
                                                              : "explicit";
        meta["tol"] = cfg.tol;
        meta["seed"] = cfg.seed;
        meta["versions"] = {{"fsph", FSPH_VERSION}, {"report_format", 1}};
        ordered_json out;
        out["meta"] = meta;
        ordered_json rows = ordered_json::array();
        for (const auto& lr : results)
            for (const auto& r : lr.rows)
                rows.push_back({{"name", r.name},
                                {"value", r.value},
                                {"bound", r.bound},
                                {"pass", r.pass}});
        out["results"] = rows;
        return out.dump(2) + "\n";
    }
    std::string text;
    text += "# subcommand=" + subcommand + "\n";
    text += std::string("# space=") +
            (cfg.space == Space::circle ? "circle" : "sphere") + "\n";
    text += "# lambda_min=" + std::to_string(cfg.lambda_min) +
            " lambda_max=" + std::to_string(cfg.lambda_max) + "\n";
    text += std::string("# k_policy=") +
            (cfg.k_policy == KPolicy::min_kineq ? "min_kineq"
             : cfg.k_policy == KPolicy::lambda6 ? "lambda6"
                                                : "explicit") +
            "\n";
    text += "# tol=" + fmt17(cfg.tol) + " seed=" + std::to_string(cfg.seed) +
            "\n";
    text += std::string("# fsph=") + FSPH_VERSION + "\n";
    text += subcommand == "localization" ? localization_header(cfg.space)
                                         : "name,value,bound,pass\n";
    for (const auto& lr : results) text += lr.csv_line;
    return text;
}

bool emit(const RunConfig& cfg, const std::string& content, std::string& err) {
    if (cfg.out.empty()) {
        std::fwrite(content.data(), 1, content.size(), stdout);
        return true;
    }
    namespace fs = std::filesystem;
    const fs::path target(cfg.out);
    fs::path tmp(target);
    tmp += ".tmp";
    {
        std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
        if (!o) {
            err = "cannot open output path: " + tmp.string();
            return false;
        }
        o << content;
        o.flush();
        if (!o) {
            std::error_code ec;
            fs::remove(tmp, ec);
            err = "write failed: " + tmp.string();
            return false;
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ec2;
        fs::remove(tmp, ec2);
        err = "rename failed: " + ec.message();
        return false;
    }
    return true;
}

int finish(const RunConfig& cfg, const std::string& subcommand,
           const std::vector<LambdaResult>& results) {
    const std::string content = render_report(cfg, subcommand, results);
    std::string err;
    if (!emit(cfg, content, err)) {
        std::fprintf(stderr, "fsph: %s\n", err.c_str());
        return 2;
    }
    const Row* worst = nullptr;
    double worst_gap = -1.0;
    for (const auto& lr : results)
        for (const auto& r : lr.rows) {
            if (r.pass) continue;
            const double gap = std::isfinite(r.value - r.bound)
                                   ? std::abs(r.value - r.bound)
                                   : 1e300;
            if (gap > worst_gap) {
                worst_gap = gap;
                worst = &r;
            }
        }
    if (worst) {
        std::fprintf(stderr, "fsph: FAIL — worst offender: %s (value=%s, bound=%s)\n",
                     worst->name.c_str(), fmt17(worst->value).c_str(),
                     fmt17(worst->bound).c_str());
        return 1;
    }
    return 0;
}

void add_common_options(CLI::App* sub, RunConfig& cfg, bool* k_given) {
    static const std::map<std::string, Space> space_map{
        {"circle", Space::circle}, {"sphere", Space::sphere}};
    static const std::map<std::string, KPolicy> policy_map{
        {"min_kineq", KPolicy::min_kineq},
        {"lambda6", KPolicy::lambda6},
        {"explicit", KPolicy::explicit_k}};
    static const std::map<std::string, Format> format_map{
        {"json", Format::json}, {"csv", Format::csv}};
    sub->add_option("--space", cfg.space, "Which space to build")
        ->required()
        ->transform(CLI::CheckedTransformer(space_map, CLI::ignore_case));
    sub->add_option("--lambda-min", cfg.lambda_min, "Smallest cutoff (>= 1)");
    sub->add_option("--lambda-max", cfg.lambda_max, "Largest cutoff");
    sub->add_option("--k-policy", cfg.k_policy,
                    "Stiffness policy: min_kineq | lambda6 | explicit")
        ->transform(CLI::CheckedTransformer(policy_map, CLI::ignore_case));
    sub->add_option("--k", cfg.k_value,
                    "Explicit stiffness value (requires --k-policy explicit)")
        ->each([k_given](const std::string&) { *k_given = true; });
    sub->add_option("--tol", cfg.tol, "Residual tolerance (> 0)");
    sub->add_option("--seed", cfg.seed, "RNG seed for sampled checks");
    sub->add_option("--format", cfg.format, "Report format: json | csv")
        ->transform(CLI::CheckedTransformer(format_map, CLI::ignore_case));
    sub->add_option("--out", cfg.out,
                    "Output file (atomic write; empty = stdout)");
}

int validate(const RunConfig& cfg, bool k_given) {
    if (cfg.lambda_min < 1) {
        std::fprintf(stderr, "fsph: --lambda-min must be >= 1\n");
        return 2;
    }
    if (cfg.lambda_min > cfg.lambda_max) {
        std::fprintf(stderr, "fsph: --lambda-min must be <= --lambda-max\n");
        return 2;
    }
    if (!(cfg.tol > 0.0)) {
        std::fprintf(stderr, "fsph: --tol must be positive\n");
        return 2;
    }
    if (cfg.k_policy == KPolicy::explicit_k) {
        if (!k_given || !(cfg.k_value > 0.0)) {
            std::fprintf(stderr,
                         "fsph: --k-policy explicit requires a positive --k\n");
            return 2;
        }
        const double kmin = cfg.space == Space::circle
                                ? circle_min_stiffness(cfg.lambda_max)
                                : sphere_min_stiffness(cfg.lambda_max);
        if (cfg.k_value < kmin)
            std::fprintf(stderr,
                         "fsph: note: k=%s is below the admissible floor %s at "
                         "lambda=%d; bound checks may legitimately fail\n",
                         fmt17(cfg.k_value).c_str(), fmt17(kmin).c_str(),
                         cfg.lambda_max);
    } else if (k_given) {
        std::fprintf(stderr, "fsph: --k is only valid with --k-policy explicit\n");
        return 2;
    }
    return 0;
}

template <typename Job>
std::vector<LambdaResult> sweep(const RunConfig& cfg, Job job) {
    std::vector<std::future<LambdaResult>> futures;
    for (int lam = cfg.lambda_min; lam <= cfg.lambda_max; ++lam)
        futures.push_back(
            std::async(std::launch::async, [&job, lam] { return job(lam); }));
    std::vector<LambdaResult> results;
    for (auto& f : futures) results.push_back(f.get());
    return results;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fsph: fuzzy circle / fuzzy sphere numerical workbench"};
    app.require_subcommand(1);

    RunConfig cfg;
    bool k_given = false;
    std::string amp_path;

    CLI::App* verify = app.add_subcommand(
        "verify", "Check every defining algebra relation against --tol");
    CLI::App* localization = app.add_subcommand(
        "localization", "Dispersion bounds per cutoff (fixed-column CSV)");
    CLI::App* resolution = app.add_subcommand(
        "resolution", "Resolution-of-identity residuals per family");
    CLI::App* spectrum = app.add_subcommand(
        "spectrum", "Position-block spectra: flags and eigenvalue bounds");
    CLI::App* ur_audit = app.add_subcommand(
        "ur-audit", "Uncertainty-relation slacks over sampled states");

    for (CLI::App* sub :
         {verify, localization, resolution, spectrum, ur_audit})
        add_common_options(sub, cfg, &k_given);
    resolution->add_option("--nodes-phi", cfg.nodes_phi,
                           "Trapezoid nodes in phi (default 2*lambda+2)");
    resolution->add_option("--nodes-theta", cfg.nodes_theta,
                           "Gauss-Legendre nodes in cos(theta) (default 2*lambda+2)");
    resolution->add_option("--nodes-psi", cfg.nodes_psi,
                           "Trapezoid nodes in psi (default 2*lambda+2)");
    for (CLI::App* sub : {resolution, ur_audit})
        sub->add_option("--amplitudes", amp_path,
                        "State file: `n re im` (circle) / `l m re im` (sphere)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (const int rc = validate(cfg, k_given); rc != 0) return rc;

    std::optional<std::vector<AmpRecord>> user;
    if (!amp_path.empty()) {
        std::string err;
        user = parse_amplitude_file(amp_path, cfg.space, err);
        if (!user) {
            std::fprintf(stderr, "fsph: malformed amplitude file: %s\n",
                         err.c_str());
            return 2;
        }
        // The file must label a state inside at least one sweep point.
        const int reach = cfg.space == Space::circle
                              ? [&] {
                                    int m = 0;
                                    for (const auto& r : *user)
                                        m = std::max(m, std::abs(r.a));
                                    return m;
                                }()
                              : [&] {
                                    int m = 0;
                                    for (const auto& r : *user)
                                        m = std::max(m, r.a);
                                    return m;
                                }();
        if (reach > cfg.lambda_max) {
            std::fprintf(stderr,
                         "fsph: amplitude labels reach %d, beyond --lambda-max "
                         "%d\n",
                         reach, cfg.lambda_max);
            return 2;
        }
    }

    try {
        if (*verify)
            return finish(cfg, "verify", sweep(cfg, [&](int lam) {
                              return run_verify(cfg, lam);
                          }));
        if (*localization)
            return finish(cfg, "localization", sweep(cfg, [&](int lam) {
                              return run_localization(cfg, lam);
                          }));
        if (*resolution) {
            RunConfig rc = cfg;
            if (cfg.space == Space::sphere && rc.lambda_max > 8) {
                // Cost grows as (Λ+1)² per state times node-count³; the
                // group-average check is capped to keep runs interactive.
                std::fprintf(stderr,
                             "fsph: note: sphere resolution sweep capped at "
                             "lambda=8 (requested %d)\n",
                             rc.lambda_max);
                rc.lambda_max = 8;
                if (rc.lambda_min > rc.lambda_max) {
                    std::fprintf(stderr,
                                 "fsph: nothing to do below the cap\n");
                    return 2;
                }
            }
            return finish(rc, "resolution", sweep(rc, [&](int lam) {
                              return run_resolution(rc, lam,
                                                    user ? &*user : nullptr);
                          }));
        }
        if (*spectrum)
            return finish(cfg, "spectrum", sweep(cfg, [&](int lam) {
                              return run_spectrum(cfg, lam);
                          }));
        if (*ur_audit)
            return finish(cfg, "ur-audit", sweep(cfg, [&](int lam) {
                              return run_ur_audit(cfg, lam,
                                                  user ? &*user : nullptr);
                          }));
    } catch (const std::exception& e) {
        std::fprintf(stderr, "fsph: internal error: %s\n", e.what());
        return 2;
    }
    return 2;
}
