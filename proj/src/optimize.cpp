// optimize.cpp

#include "qosrec/optimize.hpp"

#include <Eigen/Core>
#include <cmath>
#include <deque>

namespace qosrec {

namespace {

double eval(const Objective& f, const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    return f(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
             std::span<double>(g.data(), static_cast<std::size_t>(g.size())));
}

}  // namespace

MinimizeResult minimize_lbfgs(const Objective& objective, std::vector<double> x0,
                              const MinimizeOptions& options) {
    const Eigen::Index n = static_cast<Eigen::Index>(x0.size());
    Eigen::VectorXd x = Eigen::Map<Eigen::VectorXd>(x0.data(), n);
    Eigen::VectorXd g(n), g_new(n), x_new(n);
    double fx = eval(objective, x, g);

    std::deque<Eigen::VectorXd> s_hist, y_hist;
    std::deque<double> rho_hist;

    MinimizeResult result;
    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        if (!std::isfinite(fx)) break;
        if (g.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) {
            result.converged = true;
            break;
        }

        // Two-loop recursion for d = -H g.
        Eigen::VectorXd q = g;
        std::vector<double> alpha(s_hist.size());
        for (std::size_t i = s_hist.size(); i-- > 0;) {
            alpha[i] = rho_hist[i] * s_hist[i].dot(q);
            q -= alpha[i] * y_hist[i];
        }
        if (!s_hist.empty()) {
            q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
        } else {
            q /= std::max(1.0, g.norm());
        }
        for (std::size_t i = 0; i < s_hist.size(); ++i) {
            double beta = rho_hist[i] * y_hist[i].dot(q);
            q += (alpha[i] - beta) * s_hist[i];
        }
        Eigen::VectorXd d = -q;
        double slope = g.dot(d);
        if (!(slope < 0.0)) {
            // Lost descent; restart from steepest descent.
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            d = -g / std::max(1.0, g.norm());
            slope = g.dot(d);
        }

        // Backtracking Armijo search.
        double step = 1.0;
        double f_new = fx;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            x_new = x + step * d;
            f_new = eval(objective, x_new, g_new);
            if (std::isfinite(f_new) && f_new <= fx + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        Eigen::VectorXd s = x_new - x;
        Eigen::VectorXd y = g_new - g;
        double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > options.history) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        const double f_old = fx;
        x = x_new;
        g = g_new;
        fx = f_new;
        if (std::abs(f_old - fx) <= 1e-15 * std::max(1.0, std::abs(fx)) &&
            g.lpNorm<Eigen::Infinity>() < 1e3 * options.gradient_tolerance) {
            result.converged = true;
            ++iter;
            break;
        }
    }

    result.x.assign(x.data(), x.data() + n);
    result.value = fx;
    result.iterations = iter;
    return result;
}

}  // namespace qosrec
