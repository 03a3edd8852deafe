#include "placid/gmm.hpp"

#include "placid/normal.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace placid {

namespace {

std::string edge_name(const Edge& e) {
    return "Y" + std::to_string(e.first + 1) + "->Y" + std::to_string(e.second + 1);
}

// Per-sample residual Y_j - sum_l beta_l Y_{k_l} for block i.
Vector block_residual(const MomentSystem& sys, Index i, const Vector& beta) {
    Vector r = sys.Y.col(sys.edge_order[i].second);
    for (Index l : sys.terms[i]) r -= beta(l) * sys.Y.col(sys.edge_order[l].first);
    return r;
}

} // namespace

Matrix MomentSystem::sample_moments(const Vector& beta) const {
    Matrix m(n(), t_gamma);
    for (Index i = 0; i < edges(); ++i) {
        const Matrix& Z = bases.at(edge_order[i].first).values;
        Vector r = block_residual(*this, i, beta);
        m.middleCols(block_offset[i], Z.cols()) = Z.array().colwise() * r.array();
    }
    return m;
}

Vector MomentSystem::h_mean() const {
    Vector h(t_gamma);
    const double nn = static_cast<double>(n());
    for (Index i = 0; i < edges(); ++i) {
        const Matrix& Z = bases.at(edge_order[i].first).values;
        h.segment(block_offset[i], Z.cols()) = Z.transpose() * Y.col(edge_order[i].second) / nn;
    }
    return h;
}

Matrix MomentSystem::g_mean() const {
    Matrix g = Matrix::Zero(t_gamma, edges());
    const double nn = static_cast<double>(n());
    for (Index i = 0; i < edges(); ++i) {
        const Matrix& Z = bases.at(edge_order[i].first).values;
        for (Index l : terms[i]) {
            g.block(block_offset[i], l, Z.cols(), 1) =
                Z.transpose() * Y.col(edge_order[l].first) / nn;
        }
    }
    return g;
}

Vector MomentSystem::mean_moment(const Vector& beta) const { return h_mean() - g_mean() * beta; }

MomentSystem build_moment_system(const Matrix& X, const Matrix& Y, const AncestralGraph& arg,
                                 const MomentOptions& opts) {
    if (X.rows() != Y.rows()) throw InvalidArgument("X and Y must have the same row count");
    if (static_cast<Index>(Y.cols()) != arg.p || static_cast<Index>(X.cols()) != arg.q) {
        throw InvalidArgument("data dimensions do not match the ancestral graph");
    }
    if (opts.kinds.size() != arg.q) {
        throw InvalidArgument("one variable kind is required per secondary column");
    }
    if (opts.gamma < 1) throw InvalidArgument("gamma must be at least 1");
    arg.validate();

    MomentSystem sys;
    sys.Y = Y;
    sys.edge_order = arg.ancestral_edges;
    std::sort(sys.edge_order.begin(), sys.edge_order.end());
    sys.edge_order.erase(std::unique(sys.edge_order.begin(), sys.edge_order.end()),
                         sys.edge_order.end());

    std::map<Edge, Index> position;
    for (Index i = 0; i < sys.edge_order.size(); ++i) position[sys.edge_order[i]] = i;

    for (const auto& [k, j] : sys.edge_order) {
        IndexSet me;
        for (Index m = 0; m < arg.p; ++m) {
            if (position.count({k, m}) && position.count({m, j})) me.push_back(m);
        }
        std::vector<Index> terms;
        for (Index m : me) {
            // Present because (k, m), (m, j) in E+ and E+ is closed.
            terms.push_back(position.at({m, j}));
        }
        terms.push_back(position.at({k, j}));
        std::sort(terms.begin(), terms.end());
        sys.mediators.push_back(std::move(me));
        sys.terms.push_back(std::move(terms));
    }

    // The mediator recursion needs every (m, j) with m on a path k -> m -> j.
    std::set<Edge> closed(sys.edge_order.begin(), sys.edge_order.end());
    for (const auto& [a, b] : sys.edge_order) {
        for (const auto& [c, d] : sys.edge_order) {
            if (b == c && !closed.count({a, d})) {
                throw InvalidArgument("ancestral edges are not transitively closed: missing " +
                                      edge_name({a, d}));
            }
        }
    }

    for (const auto& [k, j] : sys.edge_order) {
        if (sys.bases.count(k)) continue;
        const IndexSet& ca = arg.candidate_ivs[k];
        if (ca.empty()) {
            throw DegenerateError("Y" + std::to_string(k + 1) +
                                  " has descendants but an empty candidate IV set");
        }
        Index gamma = opts.gamma;
        if (gamma > ca.size()) {
            sys.warnings.push_back("gamma reduced from " + std::to_string(gamma) + " to " +
                                   std::to_string(ca.size()) + " for Y" + std::to_string(k + 1) +
                                   " (candidate set size)");
            gamma = ca.size();
        }
        sys.bases.emplace(k, build_basis(X, k, ca, gamma, opts.kinds, opts.basis));
    }

    sys.t_gamma = 0;
    for (const auto& [k, j] : sys.edge_order) {
        sys.block_offset.push_back(sys.t_gamma);
        sys.t_gamma += sys.bases.at(k).spec.size();
    }
    return sys;
}

GmmSolution solve_gmm(const MomentSystem& sys, const Matrix& omega, double cond_limit) {
    const Index N = sys.edges();
    GmmSolution sol;
    sol.beta = Vector::Zero(N);
    sol.flagged.assign(N, false);
    if (N == 0) return sol;
    if (omega.rows() != static_cast<Eigen::Index>(sys.t_gamma) || omega.cols() != omega.rows()) {
        throw InvalidArgument("weighting matrix must be t_gamma x t_gamma");
    }

    Matrix G = sys.g_mean();
    Vector h = sys.h_mean();
    for (Index l = 0; l < N; ++l) {
        if (G.col(l).cwiseAbs().maxCoeff() == 0.0) {
            throw DegenerateError("singular GMM normal matrix: surrogate IVs of Y" +
                                  std::to_string(sys.edge_order[l].first + 1) +
                                  " are uncorrelated with it (relevance condition "
                                  "||E{Z_gamma Y_k}||_0 > 0 fails)");
        }
    }
    Matrix normal = G.transpose() * omega * G;
    normal = 0.5 * (normal + normal.transpose());
    Vector rhs = G.transpose() * omega * h;

    Eigen::SelfAdjointEigenSolver<Matrix> eig(normal);
    const Vector& ev = eig.eigenvalues();
    double top = ev.maxCoeff();
    double low = ev.minCoeff();
    if (!(top > 0.0)) {
        throw DegenerateError("singular GMM normal matrix (relevance condition fails)");
    }
    sol.condition = low > 0.0 ? top / low : std::numeric_limits<double>::infinity();

    if (sol.condition <= cond_limit) {
        sol.beta = normal.ldlt().solve(rhs);
        return sol;
    }

    // Pseudo-inverse over the well-determined eigen-directions; edges loading
    // on the discarded directions are flagged.
    Vector inv = Vector::Zero(N);
    for (Index i = 0; i < N; ++i) {
        if (ev(i) > top / cond_limit) {
            inv(i) = 1.0 / ev(i);
        } else {
            for (Index l = 0; l < N; ++l) {
                if (std::abs(eig.eigenvectors()(l, i)) > 1e-6) sol.flagged[l] = true;
            }
        }
    }
    sol.beta = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose() * rhs;
    std::string msg = "ill-conditioned GMM normal matrix (condition " +
                      std::to_string(sol.condition) + "); pseudo-inverse used, flagged:";
    for (Index l = 0; l < N; ++l) {
        if (sol.flagged[l]) msg += " " + edge_name(sys.edge_order[l]);
    }
    sol.warnings.push_back(msg);
    return sol;
}

VarianceComponents sandwich_variance(const MomentSystem& sys, const Matrix& X,
                                     const Vector& beta, const Matrix& omega, bool augment) {
    const Index N = sys.edges();
    const Index T = sys.t_gamma;
    const Index n = sys.n();
    const double nn = static_cast<double>(n);
    VarianceComponents vc;
    if (N == 0) {
        vc.V = Matrix::Zero(0, 0);
        vc.sigma = Vector::Zero(0);
        return vc;
    }

    // Location parameters: every (variable, factor) centering constant in use.
    std::map<std::pair<Index, Index>, Index> mu_index;
    std::vector<double> mu_center;
    std::vector<const CoordinateSpec*> mu_coord;
    if (augment) {
        for (const auto& [k, basis] : sys.bases) {
            for (const auto& c : basis.spec.coordinates) {
                for (Index d = 0; d < c.factor_count(); ++d) {
                    auto key = std::make_pair(c.variable, d);
                    if (mu_index.count(key)) continue;
                    mu_index[key] = 0;
                    mu_coord.push_back(&c);
                }
            }
        }
        Index pos = 0;
        for (auto& [key, idx] : mu_index) {
            idx = pos++;
            vc.mu_params.push_back(key);
        }
        // mu_coord in key order
        mu_coord.assign(vc.mu_params.size(), nullptr);
        for (const auto& [k, basis] : sys.bases) {
            for (const auto& c : basis.spec.coordinates) {
                for (Index d = 0; d < c.factor_count(); ++d) {
                    mu_coord[mu_index.at({c.variable, d})] = &c;
                }
            }
        }
    }
    const Index Q = vc.mu_params.size();

    // Per-sample stacked moments: [mu - phi(X_i) ; Z_i (.) residual_i].
    Matrix stacked(n, Q + T);
    for (Index a = 0; a < Q; ++a) {
        const auto& [var, d] = vc.mu_params[a];
        const CoordinateSpec& c = *mu_coord[a];
        for (Index i = 0; i < n; ++i) stacked(i, a) = c.centers[d] - c.raw_factor(d, X(i, var));
    }
    stacked.rightCols(T) = sys.sample_moments(beta);

    vc.D_block = -sys.g_mean();
    vc.C_block = Matrix::Zero(T, Q);
    if (Q > 0) {
        for (Index i = 0; i < N; ++i) {
            const auto& basis = sys.bases.at(sys.edge_order[i].first);
            std::vector<Index> offsets;
            Matrix F = centered_factors(basis.spec, X, offsets);
            Vector r = block_residual(sys, i, beta);
            for (Index col = 0; col < basis.spec.size(); ++col) {
                const auto& bc = basis.spec.columns[col];
                for (Index a = 0; a < bc.coords.size(); ++a) {
                    const auto& coord = basis.spec.coordinates[bc.coords[a]];
                    Vector prod = -r;
                    for (Index b = 0; b < bc.coords.size(); ++b) {
                        if (b == a) continue;
                        prod.array() *= F.col(offsets[bc.coords[b]] + bc.factors[b]).array();
                    }
                    Index param = mu_index.at({coord.variable, bc.factors[a]});
                    vc.C_block(sys.block_offset[i] + col, param) += prod.sum() / nn;
                }
            }
        }
    }

    vc.G_block = Matrix::Zero(Q + T, Q + N);
    vc.G_block.topLeftCorner(Q, Q).setIdentity();
    vc.G_block.bottomLeftCorner(T, Q) = vc.C_block;
    vc.G_block.bottomRightCorner(T, N) = vc.D_block;

    Matrix centered = stacked.rowwise() - stacked.colwise().mean();
    vc.F_block = centered.transpose() * centered / nn;

    vc.W_block = Matrix::Zero(Q + T, Q + T);
    vc.W_block.topLeftCorner(Q, Q).setIdentity();
    vc.W_block.bottomRightCorner(T, T) =
        omega * vc.D_block * vc.D_block.transpose() * omega;

    Matrix GtW = vc.G_block.transpose() * vc.W_block;
    Matrix bread = GtW * vc.G_block;
    bread = 0.5 * (bread + bread.transpose());
    Eigen::LDLT<Matrix> ldlt(bread);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
        ldlt.vectorD().minCoeff() <= 0.0) {
        throw DegenerateError("sandwich variance: G'WG is singular");
    }
    Matrix right = ldlt.solve(GtW);  // (G'WG)^{-1} G'W
    Matrix full = right * vc.F_block * right.transpose();
    vc.V = full.bottomRightCorner(N, N);
    vc.V = 0.5 * (vc.V + vc.V.transpose());

    double scale = std::max(1.0, vc.V.diagonal().cwiseAbs().maxCoeff());
    vc.sigma.resize(N);
    for (Index l = 0; l < N; ++l) {
        double v = vc.V(l, l);
        if (v < -1e-9 * scale) throw DegenerateError("sandwich variance is not positive semidefinite");
        vc.sigma(l) = std::sqrt(std::max(0.0, v) / nn);
    }
    return vc;
}

Vector pvalues(const Vector& beta, const Vector& sigma) {
    if (beta.size() != sigma.size()) throw InvalidArgument("pvalues: size mismatch");
    Vector p(beta.size());
    for (Eigen::Index i = 0; i < beta.size(); ++i) {
        if (!(sigma(i) > 0.0)) throw DegenerateError("pvalues: zero standard error");
        // 2 (1 - Phi(z)) == erfc(z / sqrt 2), without cancellation.
        p(i) = std::erfc(std::abs(beta(i)) / sigma(i) / std::sqrt(2.0));
    }
    return p;
}

std::vector<bool> by_select(const Vector& pvals, double q_star) {
    if (!(q_star > 0.0 && q_star < 1.0)) throw InvalidArgument("q_star must lie in (0, 1)");
    const Index N = static_cast<Index>(pvals.size());
    std::vector<bool> keep(N, false);
    if (N == 0) return keep;
    std::vector<Index> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return pvals(a) < pvals(b); });
    double harmonic = 0.0;
    for (Index j = 1; j <= N; ++j) harmonic += 1.0 / static_cast<double>(j);
    Index last = 0;
    for (Index i = 1; i <= N; ++i) {
        double thresh = static_cast<double>(i) * q_star / (static_cast<double>(N) * harmonic);
        if (pvals(order[i - 1]) <= thresh) last = i;
    }
    for (Index i = 0; i < last; ++i) keep[order[i]] = true;
    return keep;
}

std::string to_string(OmegaMode m) { return m == OmegaMode::Identity ? "identity" : "two-step"; }

OmegaMode omega_mode_from_string(const std::string& s) {
    if (s == "identity") return OmegaMode::Identity;
    if (s == "two-step") return OmegaMode::TwoStep;
    throw InvalidArgument("unknown omega mode '" + s + "'");
}

Matrix EstimationResult::coefficient_matrix(Index p) const {
    Matrix B = Matrix::Zero(p, p);
    for (Index i = 0; i < edge_order.size(); ++i) {
        if (selected[i]) B(edge_order[i].first, edge_order[i].second) = beta(i);
    }
    return B;
}

EstimationResult estimate(const Matrix& X, const Matrix& Y, const AncestralGraph& arg,
                          const EstimateOptions& opts) {
    EstimationResult res;
    res.q_star = opts.q_star;
    if (!(opts.q_star > 0.0 && opts.q_star < 1.0)) throw InvalidArgument("q_star must lie in (0, 1)");

    MomentSystem sys = build_moment_system(X, Y, arg, opts.moments);
    res.edge_order = sys.edge_order;
    res.warnings = sys.warnings;
    const Index N = sys.edges();
    if (N == 0) {
        res.beta = res.sigma = res.pvals = Vector::Zero(0);
        return res;
    }

    Matrix omega = Matrix::Identity(sys.t_gamma, sys.t_gamma);
    GmmSolution sol = solve_gmm(sys, omega, opts.cond_limit);
    if (opts.omega == OmegaMode::TwoStep) {
        Matrix m = sys.sample_moments(sol.beta);
        Matrix centered = m.rowwise() - m.colwise().mean();
        Matrix S = centered.transpose() * centered / static_cast<double>(sys.n());
        omega = S.completeOrthogonalDecomposition().pseudoInverse();
        omega = 0.5 * (omega + omega.transpose());
        sol = solve_gmm(sys, omega, opts.cond_limit);
    }
    res.beta = sol.beta;
    res.flagged = sol.flagged;
    res.warnings.insert(res.warnings.end(), sol.warnings.begin(), sol.warnings.end());

    res.variance = sandwich_variance(sys, X, res.beta, omega, opts.mean_augmentation);
    res.sigma = res.variance.sigma;

    res.pvals.resize(N);
    for (Index l = 0; l < N; ++l) {
        if (res.flagged[l] || !(res.sigma(l) > 0.0)) {
            res.pvals(l) = 1.0;
        } else {
            res.pvals(l) = std::erfc(std::abs(res.beta(l)) / res.sigma(l) / std::sqrt(2.0));
        }
    }
    res.selected = by_select(res.pvals, opts.q_star);
    for (Index l = 0; l < N; ++l) {
        if (res.selected[l]) res.selected_edges.push_back(res.edge_order[l]);
    }
    return res;
}

} // namespace placid
