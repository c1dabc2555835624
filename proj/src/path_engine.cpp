#include "gbdsde/path_engine.hpp"
#include "gbdsde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gbdsde {
namespace {

enum Stream : std::uint32_t { kBrownianB = 0, kLevy = 1 };

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t path, Stream stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32),
                      static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

void check_index(const PathBundle& b, int i, const char* what)
{
    if (i < 1 || i > b.rank)
        throw IndexError(std::string(what) + ": martingale index " + std::to_string(i) +
                         " outside 1.." + std::to_string(b.rank));
}

// dH^(i)_k = sum_{j<=i} c_{i,j} (dL^{(j)}_k - dt_k E[L_1^{(j)}]).
void fill_dH(const TeugelsBasis& basis, std::span<const double> mean_pj, const TimeGrid& grid,
             int path, std::span<const double> dl1,
             const std::vector<std::vector<double>>& pj_row, std::vector<Eigen::MatrixXd>& dH)
{
    const int n = grid.steps();
    for (int i = 1; i <= basis.rank; ++i) {
        for (int k = 0; k < n; ++k) {
            const double dt = grid.dt(k);
            double v = basis.c(i, 1) * (dl1[k] - dt * mean_pj[1]);
            for (int j = 2; j <= i; ++j)
                v += basis.c(i, j) * (pj_row[j - 2][k] - dt * mean_pj[j]);
            dH[i - 1](path, k) = v;
        }
    }
}

std::vector<double> power_means(const LevyModel& model, int rank)
{
    std::vector<double> m(static_cast<std::size_t>(rank) + 1, 0.0);
    for (int j = 1; j <= rank; ++j) m[j] = mean_power_jump(model, j);
    return m;
}

} // namespace

std::span<const JumpEvent> PathBundle::jumps_of(int path) const
{
    const auto lo = jump_offsets.at(static_cast<std::size_t>(path));
    const auto hi = jump_offsets.at(static_cast<std::size_t>(path) + 1);
    return {jumps.data() + lo, hi - lo};
}

Eigen::MatrixXd PathBundle::martingale(int i) const
{
    check_index(*this, i, "martingale");
    const int n = steps();
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n_paths, n + 1);
    for (int k = 0; k < n; ++k) H.col(k + 1) = H.col(k) + dH[i - 1].col(k);
    return H;
}

Eigen::VectorXd PathBundle::martingale_terminal(int i) const
{
    check_index(*this, i, "martingale_terminal");
    return dH[i - 1].rowwise().sum();
}

PathBundle simulate(const LevyModel& model, const TeugelsBasis& basis, const TimeGrid& grid,
                    const IncreasingProcessSpec& a_spec, int n_paths, std::uint64_t seed)
{
    if (n_paths < 1) throw ConfigError("simulate requires n_paths >= 1");
    validate(a_spec);
    if (std::abs(grid.horizon() - model.horizon()) > 1e-12 * model.horizon())
        throw ConfigError("time grid horizon differs from the model horizon");

    const int n = grid.steps();
    const int rank = basis.rank;
    const double horizon = grid.horizon();

    PathBundle out{.grid = grid, .n_paths = n_paths, .seed = seed, .rank = rank, .a_spec = a_spec};
    out.B = Eigen::MatrixXd::Zero(n_paths, n + 1);
    out.L = Eigen::MatrixXd::Zero(n_paths, n + 1);
    out.A = Eigen::MatrixXd::Zero(n_paths, n + 1);
    for (int j = 2; j <= rank; ++j) out.power_jumps.emplace_back(Eigen::MatrixXd::Zero(n_paths, n));
    for (int i = 1; i <= rank; ++i) out.dH.emplace_back(Eigen::MatrixXd::Zero(n_paths, n));
    out.jump_offsets.assign(static_cast<std::size_t>(n_paths) + 1, 0);

    const auto mean_pj = power_means(model, rank);
    std::vector<double> sqrt_dt(n);
    for (int k = 0; k < n; ++k) sqrt_dt[k] = std::sqrt(grid.dt(k));

    std::vector<double> b_row(n + 1), a_row(n + 1), dl1(n);
    std::vector<std::vector<double>> pj_row(std::max(rank - 1, 0), std::vector<double>(n));
    std::vector<JumpEvent> path_jumps;

    for (int p = 0; p < n_paths; ++p) {
        auto eng_b = make_engine(seed, static_cast<std::uint64_t>(p), kBrownianB);
        auto eng_l = make_engine(seed, static_cast<std::uint64_t>(p), kLevy);
        std::normal_distribution<double> gauss_b(0.0, 1.0);
        std::normal_distribution<double> gauss_l(0.0, 1.0);
        std::uniform_real_distribution<double> unif(0.0, horizon);

        b_row[0] = 0.0;
        for (int k = 0; k < n; ++k) b_row[k + 1] = b_row[k] + sqrt_dt[k] * gauss_b(eng_b);

        for (int k = 0; k < n; ++k) {
            dl1[k] = model.drift() * grid.dt(k);
            if (model.sigma() > 0.0) dl1[k] += model.sigma() * sqrt_dt[k] * gauss_l(eng_l);
        }

        path_jumps.clear();
        for (const auto& atom : model.atoms()) {
            std::poisson_distribution<long> count_dist(atom.intensity * horizon);
            const long count = count_dist(eng_l);
            for (long c = 0; c < count; ++c) path_jumps.push_back({unif(eng_l), atom.position});
        }
        std::sort(path_jumps.begin(), path_jumps.end(),
                  [](const JumpEvent& a, const JumpEvent& b) { return a.time < b.time; });

        for (auto& row : pj_row) std::fill(row.begin(), row.end(), 0.0);
        for (const auto& jmp : path_jumps) {
            const int k = grid.step_of(jmp.time);
            dl1[k] += jmp.size;
            double pw = jmp.size;
            for (int j = 2; j <= rank; ++j) {
                pw *= jmp.size;
                pj_row[j - 2][k] += pw;
            }
        }

        evaluate_increasing_process(a_spec, grid, b_row, a_row);
        double l = 0.0;
        for (int k = 0; k <= n; ++k) {
            out.B(p, k) = b_row[k];
            out.A(p, k) = a_row[k];
            out.L(p, k) = l;
            if (k < n) l += dl1[k];
        }
        for (int j = 2; j <= rank; ++j)
            for (int k = 0; k < n; ++k) out.power_jumps[j - 2](p, k) = pj_row[j - 2][k];
        fill_dH(basis, mean_pj, grid, p, dl1, pj_row, out.dH);

        out.jumps.insert(out.jumps.end(), path_jumps.begin(), path_jumps.end());
        out.jump_offsets[p + 1] = out.jumps.size();
    }
    return out;
}

std::vector<Eigen::MatrixXd> reconstruct_dH(const PathBundle& bundle, const LevyModel& model,
                                            const TeugelsBasis& basis)
{
    const int n = bundle.steps();
    const int rank = basis.rank;
    const auto mean_pj = power_means(model, rank);
    std::vector<Eigen::MatrixXd> dH;
    for (int i = 1; i <= rank; ++i) dH.emplace_back(Eigen::MatrixXd::Zero(bundle.n_paths, n));
    std::vector<double> dl1(n);
    std::vector<std::vector<double>> pj_row(std::max(rank - 1, 0), std::vector<double>(n));
    for (int p = 0; p < bundle.n_paths; ++p) {
        for (int k = 0; k < n; ++k) dl1[k] = bundle.dL(p, k);
        for (auto& row : pj_row) std::fill(row.begin(), row.end(), 0.0);
        for (const auto& jmp : bundle.jumps_of(p)) {
            const int k = bundle.grid.step_of(jmp.time);
            double pw = jmp.size;
            for (int j = 2; j <= rank; ++j) {
                pw *= jmp.size;
                pj_row[j - 2][k] += pw;
            }
        }
        fill_dH(basis, mean_pj, bundle.grid, p, dl1, pj_row, dH);
    }
    return dH;
}

MeanSE bracket_stats(const PathBundle& bundle, int i, int j)
{
    check_index(bundle, i, "bracket_stats");
    check_index(bundle, j, "bracket_stats");
    const Eigen::VectorXd q = bundle.dH[i - 1].cwiseProduct(bundle.dH[j - 1]).rowwise().sum();
    return mean_and_se({q.data(), static_cast<std::size_t>(q.size())});
}

std::vector<MeanSE> increment_stats(const PathBundle& bundle, int i)
{
    check_index(bundle, i, "increment_stats");
    std::vector<MeanSE> out;
    for (int k = 0; k < bundle.steps(); ++k) {
        const auto& col = bundle.dH[i - 1].col(k);
        out.push_back(mean_and_se({col.data(), static_cast<std::size_t>(col.size())}));
    }
    return out;
}

MeanSE jump_moment_stats(const PathBundle& bundle, int power)
{
    if (power < 1) throw ConfigError("jump_moment_stats requires power >= 1");
    std::vector<double> per_path(bundle.n_paths, 0.0);
    for (int p = 0; p < bundle.n_paths; ++p)
        for (const auto& jmp : bundle.jumps_of(p)) per_path[p] += std::pow(jmp.size, power);
    return mean_and_se(per_path);
}

ItoResidual ito_identity_residual(const PathBundle& bundle, const ItoIntegrands& in)
{
    const int n = bundle.steps();
    const auto& grid = bundle.grid;
    auto value = [](const std::function<double(double)>& fn, double t) { return fn ? fn(t) : 0.0; };
    const int m = std::min<int>(static_cast<int>(in.zeta.size()), bundle.rank);
    for (int i = bundle.rank; i < static_cast<int>(in.zeta.size()); ++i)
        if (in.zeta[i]) throw IndexError("ito_identity_residual: zeta index beyond basis rank");

    // Deterministic parts of the identity.
    double gamma_sq = 0.0, zeta_sq = 0.0;
    for (int k = 0; k < n; ++k) {
        const double g = value(in.gamma, grid.t(k + 1));
        gamma_sq += g * g * grid.dt(k);
        for (int i = 0; i < m; ++i) {
            const double z = value(in.zeta[i], grid.t(k));
            zeta_sq += z * z * grid.dt(k);
        }
    }

    std::vector<double> alpha(n + 1), diff(bundle.n_paths), lhs(bundle.n_paths),
        rhs(bundle.n_paths);
    std::vector<double> backward(n + 1, 0.0), forward(n + 1, 0.0);
    for (int p = 0; p < bundle.n_paths; ++p) {
        // Backward-measurable part accumulated from T, forward martingale part from 0.
        for (int k = n - 1; k >= 0; --k)
            backward[k] = backward[k + 1] + value(in.beta, grid.t(k)) * grid.dt(k) +
                          value(in.eta, grid.t(k)) * bundle.dA(p, k) +
                          value(in.gamma, grid.t(k + 1)) * bundle.dB(p, k);
        for (int k = 0; k < n; ++k) {
            double inc = 0.0;
            for (int i = 0; i < m; ++i)
                if (in.zeta[i]) inc += in.zeta[i](grid.t(k)) * bundle.dH[i](p, k);
            forward[k + 1] = forward[k] + inc;
        }
        for (int k = 0; k <= n; ++k) alpha[k] = in.terminal_constant + forward[k] + backward[k];

        double drift_terms = 0.0;
        for (int k = 0; k < n; ++k) {
            const double avg = 0.5 * (alpha[k] + alpha[k + 1]);
            drift_terms += 2.0 * avg *
                           (value(in.beta, grid.t(k)) * grid.dt(k) +
                            value(in.eta, grid.t(k)) * bundle.dA(p, k));
        }
        lhs[p] = alpha[0] * alpha[0];
        rhs[p] = alpha[n] * alpha[n] + drift_terms + gamma_sq - zeta_sq;
        diff[p] = lhs[p] - rhs[p];
    }
    const auto d = mean_and_se(diff);
    return {std::abs(d.mean), d.standard_error, mean_and_se(lhs).mean, mean_and_se(rhs).mean};
}

} // namespace gbdsde
