// Copyright 2026 The qsd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Box-constrained Nelder-Mead simplex search. Trial points are projected onto
// the box; unbounded coordinates use +-infinity limits.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qsd {

struct Box {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t size() const { return lower.size(); }

    void clamp(std::vector<double>& x) const {
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = std::clamp(x[i], lower[i], upper[i]);
        }
    }
};

struct NelderMeadOptions {
    int max_iterations = 2000;
    double f_tolerance = 1e-12;  // spread of simplex values
    double x_tolerance = 1e-10;  // max coordinate distance from best vertex
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

/// Minimizes f over the box from `start`, with initial simplex edges `step`.
template <class Objective>
NelderMeadResult nelder_mead(Objective&& f, std::vector<double> start, const std::vector<double>& step,
                             const Box& box, const NelderMeadOptions& opt = {}) {
    const std::size_t n = start.size();
    if (n == 0 || step.size() != n || box.size() != n || box.upper.size() != n) {
        throw std::invalid_argument("nelder_mead: start, step and box sizes disagree");
    }
    NelderMeadResult res;
    auto eval = [&](std::vector<double>& x) {
        box.clamp(x);
        ++res.evaluations;
        return static_cast<double>(f(static_cast<const std::vector<double>&>(x)));
    };

    std::vector<std::vector<double>> simplex(n + 1, start);
    std::vector<double> values(n + 1);
    box.clamp(simplex[0]);
    for (std::size_t i = 0; i < n; ++i) {
        auto& v = simplex[i + 1];
        v[i] += step[i];
        if (v[i] > box.upper[i]) {
            v[i] = simplex[0][i] - step[i];
        }
    }
    for (std::size_t i = 0; i <= n; ++i) {
        values[i] = eval(simplex[i]);
    }

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), trial(n), trial2(n);
    for (res.iterations = 0; res.iterations < opt.max_iterations; ++res.iterations) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[n - 1];

        double spread = values[worst] - values[best];
        double size = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                size = std::max(size, std::abs(simplex[i][k] - simplex[best][k]));
            }
        }
        if (spread <= opt.f_tolerance && size <= opt.x_tolerance) {
            res.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k];
        }
        for (auto& c : centroid) c /= static_cast<double>(n);

        for (std::size_t k = 0; k < n; ++k) trial[k] = centroid[k] + opt.reflection * (centroid[k] - simplex[worst][k]);
        const double f_reflect = eval(trial);

        if (f_reflect < values[best]) {
            for (std::size_t k = 0; k < n; ++k) trial2[k] = centroid[k] + opt.expansion * (trial[k] - centroid[k]);
            const double f_expand = eval(trial2);
            if (f_expand < f_reflect) {
                simplex[worst] = trial2;
                values[worst] = f_expand;
            } else {
                simplex[worst] = trial;
                values[worst] = f_reflect;
            }
            continue;
        }
        if (f_reflect < values[second_worst]) {
            simplex[worst] = trial;
            values[worst] = f_reflect;
            continue;
        }
        const bool outside = f_reflect < values[worst];
        for (std::size_t k = 0; k < n; ++k) {
            const double from = outside ? trial[k] : simplex[worst][k];
            trial2[k] = centroid[k] + opt.contraction * (from - centroid[k]);
        }
        const double f_contract = eval(trial2);
        if (f_contract < (outside ? f_reflect : values[worst])) {
            simplex[worst] = trial2;
            values[worst] = f_contract;
            continue;
        }
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (std::size_t k = 0; k < n; ++k) {
                simplex[i][k] = simplex[best][k] + opt.shrink * (simplex[i][k] - simplex[best][k]);
            }
            values[i] = eval(simplex[i]);
        }
    }

    const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
    res.x = simplex[best];
    res.value = values[best];
    return res;
}

}  // namespace qsd
