// SPDX-License-Identifier: MIT
#include "sqbsde/generators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sqbsde/csv.hpp"
#include "sqbsde/errors.hpp"

namespace sqbsde {

namespace {

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }
double smoothstep_prime(double t) { return 6.0 * t * (1.0 - t); }

double norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

Generator Generator::power(double q, int dim) {
    if (!(q > 2.0) || !std::isfinite(q))
        throw std::invalid_argument("power generator needs q > 2");
    if (dim < 1) throw std::invalid_argument("dimension must be positive");
    Generator g;
    g.kind_ = GeneratorKind::Power;
    g.q_ = q;
    g.dim_ = dim;
    return g;
}

Generator Generator::quadratic(double gamma, int dim) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("quadratic generator needs gamma > 0");
    if (dim < 1) throw std::invalid_argument("dimension must be positive");
    Generator g;
    g.kind_ = GeneratorKind::Quadratic;
    g.gamma_ = gamma;
    g.q_ = 2.0;
    g.dim_ = dim;
    return g;
}

Generator Generator::sampled(std::vector<std::pair<double, double>> nodes, int dim) {
    if (nodes.size() < 2) throw std::invalid_argument("sampled generator needs at least two nodes");
    if (nodes.front().first != 0.0 || nodes.front().second != 0.0)
        throw std::invalid_argument("sampled generator must start at (0, 0)");
    if (dim < 1) throw std::invalid_argument("dimension must be positive");
    Generator g;
    g.kind_ = GeneratorKind::Sampled;
    g.dim_ = dim;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        auto [z0, h0] = nodes[i - 1];
        auto [z1, h1] = nodes[i];
        if (!(z1 > z0)) throw std::invalid_argument("sampled nodes must be strictly increasing in z");
        if (!std::isfinite(h1)) throw std::invalid_argument("sampled values must be finite");
        double s = (h1 - h0) / (z1 - z0);
        if (s < 0.0) throw std::invalid_argument("sampled profile must be nondecreasing");
        if (!g.slopes_.empty() && s < g.slopes_.back() - 1e-12 * std::max(1.0, std::abs(s)))
            throw std::invalid_argument("sampled profile is not convex (divided differences decrease)");
        g.slopes_.push_back(s);
    }
    g.nodes_ = std::move(nodes);
    return g;
}

Generator Generator::truncated(double N) const {
    if (!(N > 0.0)) throw std::invalid_argument("truncation level must be positive");
    Generator g = *this;
    g.trunc_ = N;
    return g;
}

double Generator::base_h(double r) const {
    switch (kind_) {
        case GeneratorKind::Power:
            return r == 0.0 ? 0.0 : std::pow(r, q_);
        case GeneratorKind::Quadratic:
            return gamma_ * r * r;
        case GeneratorKind::Sampled: {
            const double last = nodes_.back().first;
            if (r > last)
                throw ExtrapolationError("sampled generator evaluated at |z| = " + std::to_string(r) +
                                         " beyond last node " + std::to_string(last));
            auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r,
                                       [](double v, const auto& n) { return v < n.first; });
            if (it == nodes_.end()) return nodes_.back().second;
            std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
            return nodes_[i].second + slopes_[i] * (r - nodes_[i].first);
        }
    }
    return 0.0;
}

Gradient Generator::base_hprime(double r) const {
    switch (kind_) {
        case GeneratorKind::Power:
            return {r == 0.0 ? 0.0 : q_ * std::pow(r, q_ - 1.0), true};
        case GeneratorKind::Quadratic:
            return {2.0 * gamma_ * r, true};
        case GeneratorKind::Sampled: {
            const double last = nodes_.back().first;
            if (r > last)
                throw ExtrapolationError("sampled generator gradient at |z| = " + std::to_string(r) +
                                         " beyond last node " + std::to_string(last));
            if (r == 0.0) return {0.0, slopes_.front() == 0.0};
            if (r == last) return {slopes_.back(), false};
            auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r,
                                       [](double v, const auto& n) { return v < n.first; });
            std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
            if (r == nodes_[i].first && i > 0) {
                double l = slopes_[i - 1], rr = slopes_[i];
                return {0.5 * (l + rr), l == rr};
            }
            return {slopes_[i], true};
        }
    }
    return {0.0, true};
}

double Generator::h(double r) const {
    if (!trunc_ || r <= *trunc_) return base_h(r);
    const double N = *trunc_;
    if (r >= N + 1.0) return 0.0;
    return (1.0 - smoothstep(r - N)) * base_h(r);
}

Gradient Generator::hprime(double r) const {
    if (!trunc_ || r <= *trunc_) return base_hprime(r);
    const double N = *trunc_;
    if (r >= N + 1.0) return {0.0, true};
    const double t = r - N;
    Gradient b = base_hprime(r);
    return {(1.0 - smoothstep(t)) * b.value - smoothstep_prime(t) * base_h(r), b.smooth};
}

double Generator::eval(std::span<const double> z) const {
    if (static_cast<int>(z.size()) != dim_)
        throw std::invalid_argument("argument dimension does not match generator");
    return h(norm(z));
}

Gradient Generator::grad(double z) const {
    Gradient d = hprime(z < 0 ? -z : z);
    if (z < 0) d.value = -d.value;
    return d;
}

std::vector<double> Generator::grad(std::span<const double> z, bool* smooth) const {
    if (static_cast<int>(z.size()) != dim_)
        throw std::invalid_argument("argument dimension does not match generator");
    std::vector<double> out(z.size(), 0.0);
    const double r = norm(z);
    Gradient d = hprime(r);
    if (smooth) *smooth = d.smooth;
    if (r == 0.0) return out;
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = d.value * z[i] / r;
    return out;
}

double Generator::max_slope(double r) const {
    if (kind_ == GeneratorKind::Sampled) r = std::min(r, nodes_.back().first);
    if (!trunc_ || r <= *trunc_) return std::abs(base_hprime(r).value);
    const double N = *trunc_;
    double best = std::abs(base_hprime(N).value);
    const double top = std::min(r, N + 1.0);
    constexpr int n = 128;
    for (int i = 0; i <= n; ++i) {
        double s = N + (top - N) * i / n;
        best = std::max(best, std::abs(hprime(s).value));
    }
    return best;
}

std::string Generator::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case GeneratorKind::Power: os << "power:q=" << q_; break;
        case GeneratorKind::Quadratic: os << "quadratic:gamma=" << gamma_; break;
        case GeneratorKind::Sampled: os << "sampled:nodes=" << nodes_.size(); break;
    }
    if (trunc_) os << ",truncate=" << *trunc_;
    return os.str();
}

double radial_legendre(const std::function<double(double)>& h, double y, double cap,
                       double* argmax) {
    auto phi = [&](double r) { return r * y - h(r); };
    if (y <= 0.0) {
        if (argmax) *argmax = 0.0;
        return phi(0.0);
    }
    double lo = 0.0, hi = std::min(1.0, cap);
    for (;;) {
        if (hi >= cap) {
            // Still rising at the cap: no interior maximizer reachable.
            double eps = 1e-9 * cap;
            if (phi(cap) > phi(cap - eps))
                throw UnboundedConjugateError("conjugate sup not bracketed below r = " +
                                              std::to_string(cap));
            hi = cap;
            break;
        }
        double next = std::min(2.0 * hi, cap);
        double pn = phi(next);
        if (!(pn > phi(hi))) {
            hi = next;
            break;
        }
        lo = hi;
        hi = next;
    }
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    const double tol = 1e-10 * std::max(1.0, hi);
    double a = lo, b = hi;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = phi(c), fd = phi(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = phi(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = phi(d);
        }
    }
    double m = 0.5 * (a + b);
    double best = phi(m), arg = m;
    for (double cand : {lo, hi, c, d}) {
        double v = phi(cand);
        if (v > best) {
            best = v;
            arg = cand;
        }
    }
    if (argmax) *argmax = arg;
    return best;
}

Conjugate::Conjugate(Generator gen) : gen_(std::move(gen)) {
    if (gen_.truncation()) return;
    if (gen_.kind() == GeneratorKind::Power) {
        const double q = gen_.exponent();
        const double p = q / (q - 1.0);
        closed_ = ClosedForm{p, (q - 1.0) * std::pow(q, -p)};
    } else if (gen_.kind() == GeneratorKind::Quadratic) {
        closed_ = ClosedForm{2.0, 1.0 / (4.0 * gen_.gamma())};
    }
}

double Conjugate::operator()(double x) const {
    const double y = std::abs(x);
    if (y == 0.0) return 0.0;
    if (closed_) {
        if (closed_->p == 2.0) return closed_->c * y * y;
        return closed_->c * std::pow(y, closed_->p);
    }
    const double cap =
        gen_.kind() == GeneratorKind::Sampled ? gen_.nodes().back().first : 1e150;
    return radial_legendre([this](double r) { return gen_.h(r); }, y, cap);
}

double Conjugate::eval(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != gen_.dimension())
        throw std::invalid_argument("argument dimension does not match conjugate");
    return (*this)(norm(x));
}

double Conjugate::maximizer(double x) const {
    const double y = std::abs(x);
    if (y == 0.0) return 0.0;
    if (gen_.kind() == GeneratorKind::Power && !gen_.truncation())
        return std::pow(y / gen_.exponent(), 1.0 / (gen_.exponent() - 1.0));
    if (gen_.kind() == GeneratorKind::Quadratic && !gen_.truncation())
        return y / (2.0 * gen_.gamma());
    const double cap =
        gen_.kind() == GeneratorKind::Sampled ? gen_.nodes().back().first : 1e150;
    double arg = 0.0;
    radial_legendre([this](double r) { return gen_.h(r); }, y, cap, &arg);
    return arg;
}

double young_gap(const Generator& gen, const Conjugate& conj, double z, double x) {
    return gen(z) + conj(x) - z * x;
}

double young_gap(const Generator& gen, const Conjugate& conj, std::span<const double> z,
                 std::span<const double> x) {
    if (z.size() != x.size()) throw std::invalid_argument("dimension mismatch");
    double dot = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) dot += z[i] * x[i];
    return gen.eval(z) + conj.eval(x) - dot;
}

std::vector<ProbePoint> superquadratic_probe(const Generator& gen, std::size_t K) {
    if (K < 1) throw std::invalid_argument("probe count must be at least 1");
    if (gen.kind() == GeneratorKind::Quadratic && !gen.truncation())
        throw NotSuperquadraticError("quadratic generator: g(z)/|z|^2 is constant");
    std::vector<ProbePoint> out;
    out.reserve(K);
    auto ratio = [&](double z) { return gen.h(z) / (z * z); };
    const bool exact = gen.kind() == GeneratorKind::Power && !gen.truncation();
    const double cap =
        gen.kind() == GeneratorKind::Sampled ? gen.nodes().back().first : 1e150;
    for (std::size_t k = 1; k <= K; ++k) {
        const double target = static_cast<double>(k);
        double z;
        if (exact) {
            z = std::pow(target, 1.0 / (gen.exponent() - 2.0));
            if (!std::isfinite(z) || !std::isfinite(gen.h(z)))
                throw NotSuperquadraticError("probe point overflows for k = " + std::to_string(k));
        } else {
            double hi = std::min(1.0, cap);
            while (ratio(hi) < target) {
                if (hi >= cap)
                    throw NotSuperquadraticError("no z with g(z)/z^2 >= " + std::to_string(k) +
                                                 " below " + std::to_string(cap));
                hi = std::min(2.0 * hi, cap);
            }
            double lo = hi / 2.0;
            if (ratio(lo) >= target) lo = 0.0;
            for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
                double mid = 0.5 * (lo + hi);
                if (mid > 0.0 && ratio(mid) >= target)
                    hi = mid;
                else
                    lo = mid;
            }
            z = hi;
        }
        out.push_back({z, ratio(z)});
    }
    return out;
}

GrowthReport check_growth_duality(const Generator& gen, const Conjugate& conj, double R,
                                  double M) {
    if (!(R > 0.0)) throw std::invalid_argument("probe radius must be positive");
    GrowthReport r{};
    r.R = R;
    r.f_ratio_R = conj(R) / (R * R);
    r.f_ratio_10R = conj(10.0 * R) / (100.0 * R * R);
    r.g_ratio_R = gen(R) / (R * R);
    r.g_ratio_10R = gen(10.0 * R) / (100.0 * R * R);
    r.superquadratic_trend = r.f_ratio_10R < r.f_ratio_R && r.g_ratio_10R > r.g_ratio_R;
    r.M = M;
    r.alpha = conj(M);
    return r;
}

Generator load_sampled_generator(const std::string& path, int dim) {
    return Generator::sampled(read_two_column_csv(path), dim);
}

double penalty_of_gradient(const Generator& gen, double z) {
    const double r = std::abs(z);
    return r * gen.hprime(r).value - gen.h(r);
}

}  // namespace sqbsde
