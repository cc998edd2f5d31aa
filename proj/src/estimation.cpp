#include "duet/estimation.hpp"

#include "duet/io.hpp"
#include "duet/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace duet {

void FringeDataset::validate() const {
    if (delta_phi_rad.size() != counts.size() || delta_phi_rad.size() != trials.size())
        throw std::invalid_argument("fringe dataset columns differ in length");
    for (std::size_t i = 0; i < size(); ++i) {
        if (trials[i] < 1.0) throw std::invalid_argument("each point needs >= 1 trial");
        if (counts[i] < 0.0 || counts[i] > trials[i])
            throw std::invalid_argument("counts must satisfy 0 <= k <= n");
    }
}

void FringeDataset::add(double delta_phi, double k, double n) {
    delta_phi_rad.push_back(delta_phi);
    counts.push_back(k);
    trials.push_back(n);
}

FringeDataset FringeDataset::from_records(const std::vector<CountRecord>& records) {
    FringeDataset data;
    for (const auto& record : records)
        data.add(record.setting, static_cast<double>(record.n_witness),
                 static_cast<double>(record.n_heralds));
    return data;
}

FringeDataset FringeDataset::from_csv(const std::string& path) {
    const CsvTable csv = read_csv(path);
    FringeDataset data;
    data.delta_phi_rad = csv.column("delta_phi_rad");
    data.counts = csv.column("n_witness");
    data.trials = csv.column("n_heralds");
    data.validate();
    return data;
}

namespace {

struct LinearFringeFit {
    Eigen::Vector3d beta;        // (A, B, C) for A + B cos + C sin
    Eigen::Matrix3d covariance;
    double chi2 = 0.0;
    int dof = 0;
};

LinearFringeFit solve_linear(const FringeDataset& data) {
    const std::size_t n = data.size();
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd rate(n);
    Eigen::VectorXd weight(n);
    Eigen::VectorXd count_floor(n);
    for (std::size_t i = 0; i < n; ++i) {
        design(i, 0) = 1.0;
        design(i, 1) = std::cos(data.delta_phi_rad[i]);
        design(i, 2) = std::sin(data.delta_phi_rad[i]);
        rate(i) = data.counts[i] / data.trials[i];
        count_floor(i) = std::max(data.counts[i], 1.0);
        weight(i) = data.trials[i] / count_floor(i);
    }

    const Eigen::Matrix3d normal = design.transpose() * weight.asDiagonal() * design;
    Eigen::FullPivLU<Eigen::Matrix3d> lu(normal);
    if (lu.rank() < 3)
        throw std::invalid_argument("degenerate fringe design: phases coincide modulo pi");

    LinearFringeFit fit;
    fit.beta = lu.solve(design.transpose() * (weight.asDiagonal() * rate));
    const Eigen::VectorXd residual = rate - design * fit.beta;
    fit.chi2 = residual.transpose() * (weight.asDiagonal() * residual);
    fit.dof = static_cast<int>(n) - 3;

    // Sandwich covariance with Poisson count variances k_i / n_i^2: with the
    // w_i = n_i / max(k_i, 1) weights the middle term collapses to
    // X^T diag(1/max(k_i, 1)) X.
    const Eigen::Matrix3d inverse = lu.inverse();
    const Eigen::Matrix3d middle =
        design.transpose() * count_floor.cwiseInverse().asDiagonal() * design;
    fit.covariance = inverse * middle * inverse;
    return fit;
}

// (A, B, C) -> (A, V, phi0) with the delta-method Jacobian.
void to_fringe_parameters(const LinearFringeFit& linear, FringeFit& out) {
    const double a = linear.beta(0);
    const double b = linear.beta(1);
    const double c = linear.beta(2);
    const double r = std::hypot(b, c);
    const double r_safe = std::max(r, 1e-15 * std::max(std::abs(a), 1e-30));

    out.mean_level = a;
    out.visibility_raw = a != 0.0 ? r / a : 0.0;
    out.visibility = std::clamp(out.visibility_raw, 0.0, 1.0);
    out.phase_offset_rad = r > 0.0 ? std::atan2(c, b) : 0.0;

    Eigen::Matrix3d jacobian = Eigen::Matrix3d::Zero();
    jacobian(0, 0) = 1.0;
    jacobian(1, 0) = -r / (a * a);
    jacobian(1, 1) = b / (a * r_safe);
    jacobian(1, 2) = c / (a * r_safe);
    jacobian(2, 1) = -c / (r_safe * r_safe);
    jacobian(2, 2) = b / (r_safe * r_safe);

    out.covariance = jacobian * linear.covariance * jacobian.transpose();
    out.mean_level_err = std::sqrt(std::max(0.0, out.covariance(0, 0)));
    out.visibility_err = std::sqrt(std::max(0.0, out.covariance(1, 1)));
    out.phase_offset_err = std::sqrt(std::max(0.0, out.covariance(2, 2)));
    out.chi2 = linear.chi2;
    out.dof = linear.dof;
}

void bootstrap_errors(const FringeDataset& data, const FringeFit& base, const FitOptions& options,
                      FringeFit& out) {
    // Parametric resampling from the fitted model keeps zero-count points
    // informative.
    std::vector<double> model_p(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double p = base.mean_level *
                         (1.0 + base.visibility *
                                    std::cos(data.delta_phi_rad[i] - base.phase_offset_rad));
        model_p[i] = std::clamp(p, 0.0, 1.0);
    }

    std::vector<Eigen::Vector3d> samples;
    samples.reserve(static_cast<std::size_t>(options.bootstrap_replicas));
    for (int replica = 0; replica < options.bootstrap_replicas; ++replica) {
        FringeDataset resampled = data;
        for (std::size_t i = 0; i < data.size(); ++i) {
            RandomStream stream(options.bootstrap_seed, StreamDomain::bootstrap,
                                static_cast<std::uint32_t>(replica),
                                static_cast<std::uint32_t>(i));
            resampled.counts[i] = static_cast<double>(count_bernoulli(
                stream, static_cast<std::uint64_t>(data.trials[i]), model_p[i]));
        }
        try {
            const LinearFringeFit linear = solve_linear(resampled);
            FringeFit replica_fit;
            to_fringe_parameters(linear, replica_fit);
            if (!(replica_fit.mean_level > 0.0) || !std::isfinite(replica_fit.visibility_raw))
                continue;
            double phi = replica_fit.phase_offset_rad;
            while (phi - base.phase_offset_rad > M_PI) phi -= 2.0 * M_PI;
            while (phi - base.phase_offset_rad < -M_PI) phi += 2.0 * M_PI;
            samples.push_back({replica_fit.mean_level, replica_fit.visibility_raw, phi});
        } catch (const std::exception&) {
            // Degenerate resample; skip.
        }
    }
    if (samples.size() < static_cast<std::size_t>(options.bootstrap_replicas) / 2) return;

    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (const auto& sample : samples) mean += sample;
    mean /= static_cast<double>(samples.size());
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& sample : samples) {
        const Eigen::Vector3d centered = sample - mean;
        cov += centered * centered.transpose();
    }
    cov /= static_cast<double>(samples.size() - 1);

    out.covariance = cov;
    out.mean_level_err = std::sqrt(cov(0, 0));
    out.visibility_err = std::sqrt(cov(1, 1));
    out.phase_offset_err = std::sqrt(cov(2, 2));
    out.bootstrap_used = true;
}

}  // namespace

FringeFit fit_fringe(const FringeDataset& data, const FitOptions& options) {
    data.validate();
    if (data.size() < 3) throw std::invalid_argument("fringe fit needs >= 3 points");

    std::set<long long> distinct;
    for (double phi : data.delta_phi_rad)
        distinct.insert(llround(wrap_angle(phi) * 1e9));
    if (distinct.size() < 3)
        throw std::invalid_argument("fringe fit needs >= 3 distinct phase points");

    if (*std::max_element(data.counts.begin(), data.counts.end()) <= 0.0)
        throw std::runtime_error("no signal: every count is zero");

    const LinearFringeFit linear = solve_linear(data);
    FringeFit fit;
    to_fringe_parameters(linear, fit);
    if (fit.mean_level <= 0.0)
        throw std::runtime_error("no signal: fitted mean level is not positive");

    fit.residuals.resize(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double model = linear.beta(0) + linear.beta(1) * std::cos(data.delta_phi_rad[i]) +
                             linear.beta(2) * std::sin(data.delta_phi_rad[i]);
        fit.residuals[i] = data.counts[i] / data.trials[i] - model;
    }

    if (options.bootstrap_replicas > 0 &&
        *std::min_element(data.counts.begin(), data.counts.end()) <
            options.bootstrap_count_threshold)
        bootstrap_errors(data, fit, options, fit);
    return fit;
}

ValueWithError concurrence_from_fringe(const FringeFit& fit) {
    return {fit.visibility, fit.visibility_err};
}

ValueWithError concurrence_from_parity(const std::array<double, 4>& populations,
                                       const std::vector<std::pair<double, double>>& parity_curve) {
    for (double population : populations)
        if (population < -1e-9) throw std::invalid_argument("negative population");
    if (parity_curve.empty()) throw std::invalid_argument("parity curve is empty");

    const double p1 = std::max(0.0, populations[0]);
    const double p2 = std::max(0.0, populations[1]);
    const double p3 = std::max(0.0, populations[2]);
    const double p4 = std::max(0.0, populations[3]);
    const double total = p1 + p2 + p3 + p4;
    if (std::abs(total - 1.0) > 1e-8)
        throw std::invalid_argument("populations must sum to one");

    auto model = [&](double coherence, double phi_rf) {
        DensityMatrix rho;
        rho.m(0, 0) = p1 / total;  // absorb rounding in the inputs
        rho.m(1, 1) = p2 / total;
        rho.m(2, 2) = p3 / total;
        rho.m(3, 3) = 1.0 - (p1 + p2 + p3) / total;
        rho.m(0, 1) = coherence / total;
        rho.m(1, 0) = coherence / total;
        return parity_expectation(rho, 0.5 * M_PI, phi_rf);
    };

    const double max_coherence = std::sqrt(p1 * p2);
    double coherence_hat = 0.0;
    double coherence_var = 0.0;
    if (max_coherence > 0.0) {
        // The model is linear in the coherence; regress the residual against
        // the numerically evaluated sensitivity.
        double s_dot_s = 0.0;
        double s_dot_y = 0.0;
        std::vector<double> sensitivity(parity_curve.size());
        std::vector<double> offset(parity_curve.size());
        for (std::size_t i = 0; i < parity_curve.size(); ++i) {
            const double phi_rf = parity_curve[i].first;
            offset[i] = model(0.0, phi_rf);
            sensitivity[i] = (model(max_coherence, phi_rf) - offset[i]) / max_coherence;
            s_dot_s += sensitivity[i] * sensitivity[i];
            s_dot_y += sensitivity[i] * (parity_curve[i].second - offset[i]);
        }
        if (s_dot_s <= 0.0)
            throw std::runtime_error("parity fit failed: model insensitive to the coherence");
        coherence_hat = s_dot_y / s_dot_s;

        double ssr = 0.0;
        for (std::size_t i = 0; i < parity_curve.size(); ++i) {
            const double r = parity_curve[i].second - offset[i] - coherence_hat * sensitivity[i];
            ssr += r * r;
        }
        const std::size_t dof = parity_curve.size() > 1 ? parity_curve.size() - 1 : 1;
        coherence_var = ssr / static_cast<double>(dof) / s_dot_s;
    }

    const double concurrence = std::max(0.0, 2.0 * coherence_hat - 2.0 * std::sqrt(p3 * p4));
    return {concurrence, 2.0 * std::sqrt(std::max(0.0, coherence_var))};
}

double g2_zero(double indistinguishability) {
    if (indistinguishability < 0.0 || indistinguishability > 1.0)
        throw std::invalid_argument("indistinguishability must be in [0, 1]");
    return 0.5 * (1.0 + indistinguishability);
}

namespace {

struct ToneFit {
    Eigen::Vector3d beta = Eigen::Vector3d::Zero();
    double ssr = 0.0;
    Eigen::Matrix3d normal_inverse = Eigen::Matrix3d::Identity();
    bool ok = false;
};

ToneFit fit_tone(const std::vector<double>& t, const std::vector<double>& y,
                 const std::vector<double>& w, double frequency_hz) {
    const std::size_t n = t.size();
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd values(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double angle = 2.0 * M_PI * frequency_hz * t[i];
        design(i, 0) = 1.0;
        design(i, 1) = std::cos(angle);
        design(i, 2) = std::sin(angle);
        values(i) = y[i];
    }
    Eigen::VectorXd weights = Eigen::Map<const Eigen::VectorXd>(w.data(), n);
    const Eigen::Matrix3d normal = design.transpose() * weights.asDiagonal() * design;
    Eigen::FullPivLU<Eigen::Matrix3d> lu(normal);
    ToneFit fit;
    if (lu.rank() < 3) return fit;
    fit.beta = lu.solve(design.transpose() * (weights.asDiagonal() * values));
    const Eigen::VectorXd residual = values - design * fit.beta;
    fit.ssr = residual.transpose() * (weights.asDiagonal() * residual);
    fit.normal_inverse = lu.inverse();
    fit.ok = true;
    return fit;
}

}  // namespace

OscillationFit fit_oscillation(const std::vector<double>& time_s, const std::vector<double>& value,
                               const std::vector<double>& sigma) {
    if (time_s.size() != value.size()) throw std::invalid_argument("time/value size mismatch");
    if (time_s.size() < 5) throw std::invalid_argument("oscillation fit needs >= 5 points");
    if (!sigma.empty() && sigma.size() != time_s.size())
        throw std::invalid_argument("sigma size mismatch");

    std::vector<double> weights(time_s.size(), 1.0);
    if (!sigma.empty())
        for (std::size_t i = 0; i < sigma.size(); ++i)
            weights[i] = sigma[i] > 0.0 ? 1.0 / (sigma[i] * sigma[i]) : 1.0;

    const auto [t_min_it, t_max_it] = std::minmax_element(time_s.begin(), time_s.end());
    const double span = *t_max_it - *t_min_it;
    if (span <= 0.0) throw std::invalid_argument("zero time span");
    double min_dt = span;
    std::vector<double> sorted_t = time_s;
    std::sort(sorted_t.begin(), sorted_t.end());
    for (std::size_t i = 1; i < sorted_t.size(); ++i)
        min_dt = std::min(min_dt, std::max(sorted_t[i] - sorted_t[i - 1], 1e-12 * span));

    const double f_lo = 0.25 / span;
    const double f_hi = 0.45 / min_dt;
    const double df = 1.0 / (16.0 * span);

    double best_f = f_lo;
    double best_ssr = std::numeric_limits<double>::infinity();
    for (double f = f_lo; f <= f_hi; f += df) {
        const ToneFit fit = fit_tone(time_s, value, weights, f);
        if (fit.ok && fit.ssr < best_ssr) {
            best_ssr = fit.ssr;
            best_f = f;
        }
    }

    // Parabolic refinement on the SSR samples around the grid minimum.
    const ToneFit below = fit_tone(time_s, value, weights, best_f - df);
    const ToneFit above = fit_tone(time_s, value, weights, best_f + df);
    double refined_f = best_f;
    if (below.ok && above.ok) {
        const double denom = below.ssr - 2.0 * best_ssr + above.ssr;
        if (denom > 0.0) {
            const double shift = 0.5 * (below.ssr - above.ssr) / denom;
            refined_f = best_f + std::clamp(shift, -1.0, 1.0) * df;
        }
    }

    const ToneFit final_fit = fit_tone(time_s, value, weights, refined_f);
    if (!final_fit.ok) throw std::runtime_error("oscillation fit failed");

    OscillationFit result;
    result.mean = final_fit.beta(0);
    result.amplitude = std::hypot(final_fit.beta(1), final_fit.beta(2));
    result.phase_rad = std::atan2(final_fit.beta(2), final_fit.beta(1));
    result.ssr = final_fit.ssr;
    result.period_s = 1.0 / refined_f;

    const int dof = static_cast<int>(time_s.size()) - 4;
    const double variance_scale = dof > 0 ? final_fit.ssr / dof : 1.0;
    const double amp = std::max(result.amplitude, 1e-300);
    const Eigen::Matrix3d cov = final_fit.normal_inverse * variance_scale;
    const double b = final_fit.beta(1);
    const double c = final_fit.beta(2);
    result.amplitude_err =
        std::sqrt(std::max(0.0, (b * b * cov(1, 1) + c * c * cov(2, 2) + 2.0 * b * c * cov(1, 2)) /
                                    (amp * amp)));

    // Frequency error from the chi^2 curvature around the minimum.
    if (below.ok && above.ok) {
        const double curvature = (below.ssr - 2.0 * final_fit.ssr + above.ssr) / (df * df);
        if (curvature > 0.0) {
            const double sigma_f = std::sqrt(2.0 * variance_scale / curvature);
            result.period_err_s = sigma_f / (refined_f * refined_f);
        }
    }

    const double cycles = refined_f * span;
    result.oscillation_detected =
        result.amplitude_err > 0.0 ? (result.amplitude / result.amplitude_err > 3.0 && cycles > 0.75)
                                   : (result.amplitude > 0.0 && cycles > 0.75);
    return result;
}

}  // namespace duet
