// SPDX-License-Identifier: MIT
#include "sqbsde/terminal_data.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sqbsde/csv.hpp"
#include "sqbsde/errors.hpp"

namespace sqbsde {

namespace {

class ConstantProfile final : public Profile {
public:
    explicit ConstantProfile(double c) : c_(c) {}
    double eval(double) const override { return c_; }
    double infimum() const override { return c_; }
    double supremum() const override { return c_; }
    Regularity regularity() const override { return {RegularityKind::Lipschitz, 0.0, {}}; }
    std::string describe() const override {
        std::ostringstream os;
        os << "constant:c=" << c_;
        return os.str();
    }

private:
    double c_;
};

class CosineProfile final : public Profile {
public:
    CosineProfile(double a, double w) : a_(a), w_(w) {}
    double eval(double x) const override { return a_ * std::cos(w_ * x); }
    double infimum() const override { return w_ == 0.0 ? a_ : -std::abs(a_); }
    double supremum() const override { return w_ == 0.0 ? a_ : std::abs(a_); }
    Regularity regularity() const override {
        return {RegularityKind::Lipschitz, std::abs(a_ * w_), {}};
    }
    std::string describe() const override {
        std::ostringstream os;
        os << "cos:amplitude=" << a_ << ",frequency=" << w_;
        return os.str();
    }

private:
    double a_, w_;
};

class LorentzianProfile final : public Profile {
public:
    LorentzianProfile(double a, double c, double s) : a_(a), c_(c), s_(s) {
        if (!(s > 0.0)) throw std::invalid_argument("lorentzian width must be positive");
    }
    double eval(double x) const override {
        double y = (x - c_) / s_;
        return a_ / (1.0 + y * y);
    }
    double infimum() const override { return std::min(0.0, a_); }
    double supremum() const override { return std::max(0.0, a_); }
    Regularity regularity() const override {
        return {RegularityKind::Lipschitz, std::abs(a_) / s_ * 3.0 * std::sqrt(3.0) / 8.0, {}};
    }
    std::string describe() const override {
        std::ostringstream os;
        os << "lorentzian:amplitude=" << a_ << ",center=" << c_ << ",width=" << s_;
        return os.str();
    }

private:
    double a_, c_, s_;
};

class GaussianProfile final : public Profile {
public:
    GaussianProfile(double a, double c, double s) : a_(a), c_(c), s_(s) {
        if (!(s > 0.0)) throw std::invalid_argument("gaussian width must be positive");
    }
    double eval(double x) const override {
        double y = (x - c_) / s_;
        return a_ * std::exp(-0.5 * y * y);
    }
    double infimum() const override { return std::min(0.0, a_); }
    double supremum() const override { return std::max(0.0, a_); }
    Regularity regularity() const override {
        return {RegularityKind::Lipschitz, std::abs(a_) / s_ * std::exp(-0.5), {}};
    }
    std::string describe() const override {
        std::ostringstream os;
        os << "gaussian:amplitude=" << a_ << ",center=" << c_ << ",width=" << s_;
        return os.str();
    }

private:
    double a_, c_, s_;
};

class TanhProfile final : public Profile {
public:
    TanhProfile(double a, double s) : a_(a), s_(s) {
        if (!(s > 0.0)) throw std::invalid_argument("tanh width must be positive");
    }
    double eval(double x) const override { return a_ * std::tanh(x / s_); }
    double infimum() const override { return -std::abs(a_); }
    double supremum() const override { return std::abs(a_); }
    Regularity regularity() const override {
        return {RegularityKind::Lipschitz, std::abs(a_) / s_, {}};
    }
    std::string describe() const override {
        std::ostringstream os;
        os << "tanh:amplitude=" << a_ << ",width=" << s_;
        return os.str();
    }

private:
    double a_, s_;
};

class TabulatedProfile final : public Profile {
public:
    explicit TabulatedProfile(std::vector<std::pair<double, double>> nodes)
        : nodes_(std::move(nodes)) {
        if (nodes_.empty()) throw std::invalid_argument("tabulated profile needs nodes");
        for (std::size_t i = 1; i < nodes_.size(); ++i)
            if (!(nodes_[i].first > nodes_[i - 1].first))
                throw std::invalid_argument("tabulated x must be strictly increasing");
        lo_ = hi_ = nodes_.front().second;
        for (auto& [x, v] : nodes_) {
            if (!std::isfinite(v)) throw std::invalid_argument("tabulated values must be finite");
            lo_ = std::min(lo_, v);
            hi_ = std::max(hi_, v);
        }
        for (std::size_t i = 1; i < nodes_.size(); ++i)
            lip_ = std::max(lip_, std::abs((nodes_[i].second - nodes_[i - 1].second) /
                                           (nodes_[i].first - nodes_[i - 1].first)));
    }
    double eval(double x) const override {
        if (x <= nodes_.front().first) return nodes_.front().second;
        if (x >= nodes_.back().first) return nodes_.back().second;
        auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x,
                                   [](double v, const auto& n) { return v < n.first; });
        const auto& [x1, v1] = *it;
        const auto& [x0, v0] = *(it - 1);
        return v0 + (v1 - v0) * (x - x0) / (x1 - x0);
    }
    double infimum() const override { return lo_; }
    double supremum() const override { return hi_; }
    std::vector<double> breakpoints() const override {
        std::vector<double> out;
        out.reserve(nodes_.size());
        for (auto& n : nodes_) out.push_back(n.first);
        return out;
    }
    Regularity regularity() const override { return {RegularityKind::Lipschitz, lip_, {}}; }
    std::string describe() const override {
        return "tabulated:nodes=" + std::to_string(nodes_.size());
    }

private:
    std::vector<std::pair<double, double>> nodes_;
    double lo_ = 0.0, hi_ = 0.0, lip_ = 0.0;
};

class StepProfile final : public Profile {
public:
    StepProfile(double jump, double low, double high, JumpValue at)
        : jump_(jump), low_(low), high_(high), at_(at) {}
    double eval(double x) const override {
        if (x < jump_) return low_;
        if (x > jump_) return high_;
        return at_ == JumpValue::Lower ? std::min(low_, high_) : std::max(low_, high_);
    }
    double limit(double x, Approach from) const override {
        if (x != jump_) return eval(x);
        return from == Approach::Left ? low_ : high_;
    }
    double infimum() const override { return std::min(low_, high_); }
    double supremum() const override { return std::max(low_, high_); }
    std::vector<double> breakpoints() const override { return {jump_}; }
    Regularity regularity() const override {
        if (low_ == high_) return {RegularityKind::Lipschitz, 0.0, {}};
        return {at_ == JumpValue::Lower ? RegularityKind::LowerSemiContinuous
                                        : RegularityKind::UpperSemiContinuous,
                0.0,
                {}};
    }
    std::string describe() const override {
        std::ostringstream os;
        os << "step:jump=" << jump_ << ",low=" << low_ << ",high=" << high_
           << ",at_jump=" << (at_ == JumpValue::Lower ? "lower" : "upper");
        return os.str();
    }

private:
    double jump_, low_, high_;
    JumpValue at_;
};

class RegularizedProfile final : public Profile {
public:
    RegularizedProfile(TerminalCondition base, double m, Side side)
        : base_(std::move(base)), m_(m), side_(side) {
        if (!(m >= 0.0)) throw std::invalid_argument("regularization parameter must be >= 0");
    }
    double eval(double x) const override {
        return side_ == Side::Lower ? inf_convolution(base_, m_, x)
                                    : sup_convolution(base_, m_, x);
    }
    double infimum() const override { return base_.infimum(); }
    double supremum() const override { return base_.supremum(); }
    Regularity regularity() const override {
        Regularity b = base_.regularity();
        double L = m_;
        if (b.kind == RegularityKind::Lipschitz) L = std::min(L, b.lipschitz);
        return {RegularityKind::Lipschitz, L, {}};
    }
    std::string describe() const override {
        std::ostringstream os;
        os << (side_ == Side::Lower ? "inf" : "sup") << "-convolution(m=" << m_ << ")["
           << base_.describe() << "]";
        return os.str();
    }

private:
    TerminalCondition base_;
    double m_;
    Side side_;
};

}  // namespace

TerminalCondition TerminalCondition::from_profile(std::shared_ptr<const Profile> p) {
    if (!p) throw std::invalid_argument("null profile");
    TerminalCondition tc;
    tc.profile_ = std::move(p);
    return tc;
}

TerminalCondition TerminalCondition::constant(double c) {
    return from_profile(std::make_shared<ConstantProfile>(c));
}
TerminalCondition TerminalCondition::cosine(double a, double w) {
    return from_profile(std::make_shared<CosineProfile>(a, w));
}
TerminalCondition TerminalCondition::lorentzian(double a, double c, double s) {
    return from_profile(std::make_shared<LorentzianProfile>(a, c, s));
}
TerminalCondition TerminalCondition::gaussian(double a, double c, double s) {
    return from_profile(std::make_shared<GaussianProfile>(a, c, s));
}
TerminalCondition TerminalCondition::tanh_profile(double a, double s) {
    return from_profile(std::make_shared<TanhProfile>(a, s));
}
TerminalCondition TerminalCondition::tabulated(std::vector<std::pair<double, double>> nodes) {
    return from_profile(std::make_shared<TabulatedProfile>(std::move(nodes)));
}
TerminalCondition TerminalCondition::step(double jump, double low, double high, JumpValue at) {
    return from_profile(std::make_shared<StepProfile>(jump, low, high, at));
}

TerminalCondition TerminalCondition::shifted(double a) const {
    TerminalCondition tc = *this;
    tc.offset_ += a;
    tc.declared_sup_ = -1.0;
    return tc;
}

TerminalCondition TerminalCondition::scaled(double k) const {
    TerminalCondition tc = *this;
    tc.offset_ *= k;
    tc.scale_ *= k;
    tc.declared_sup_ = declared_sup_ >= 0.0 ? declared_sup_ * std::abs(k) : -1.0;
    if (reg_override_) {
        Regularity r = *reg_override_;
        r.lipschitz *= std::abs(k);
        for (auto& e : r.modulus) e.eps *= std::abs(k);
        if (k < 0 && r.kind == RegularityKind::LowerSemiContinuous)
            r.kind = RegularityKind::UpperSemiContinuous;
        else if (k < 0 && r.kind == RegularityKind::UpperSemiContinuous)
            r.kind = RegularityKind::LowerSemiContinuous;
        tc.reg_override_ = std::make_shared<const Regularity>(std::move(r));
    }
    return tc;
}

TerminalCondition TerminalCondition::regularized(double m, Side side) const {
    return from_profile(std::make_shared<RegularizedProfile>(*this, m, side));
}

TerminalCondition TerminalCondition::with_regularity(Regularity r) const {
    TerminalCondition tc = *this;
    std::sort(r.modulus.begin(), r.modulus.end(),
              [](const ModulusEntry& a, const ModulusEntry& b) { return a.eps < b.eps; });
    tc.reg_override_ = std::make_shared<const Regularity>(std::move(r));
    return tc;
}

TerminalCondition TerminalCondition::with_sup_norm(double declared) const {
    if (!(declared >= 0.0)) throw std::invalid_argument("sup norm must be nonnegative");
    TerminalCondition tc = *this;
    tc.declared_sup_ = declared;
    return tc;
}

double TerminalCondition::infimum() const {
    return scale_ >= 0.0 ? offset_ + scale_ * profile_->infimum()
                         : offset_ + scale_ * profile_->supremum();
}

double TerminalCondition::supremum() const {
    return scale_ >= 0.0 ? offset_ + scale_ * profile_->supremum()
                         : offset_ + scale_ * profile_->infimum();
}

double TerminalCondition::sup_norm() const {
    if (declared_sup_ >= 0.0) return declared_sup_;
    return std::max(std::abs(infimum()), std::abs(supremum()));
}

Regularity TerminalCondition::regularity() const {
    if (reg_override_) return *reg_override_;
    Regularity r = profile_->regularity();
    const double k = std::abs(scale_);
    r.lipschitz *= k;
    for (auto& e : r.modulus) e.eps *= k;
    if (scale_ < 0 && r.kind == RegularityKind::LowerSemiContinuous)
        r.kind = RegularityKind::UpperSemiContinuous;
    else if (scale_ < 0 && r.kind == RegularityKind::UpperSemiContinuous)
        r.kind = RegularityKind::LowerSemiContinuous;
    if (scale_ == 0.0) r = {RegularityKind::Lipschitz, 0.0, {}};
    return r;
}

std::string TerminalCondition::describe() const {
    std::ostringstream os;
    if (scale_ != 1.0) os << scale_ << "*";
    os << profile_->describe();
    if (offset_ != 0.0) os << (offset_ > 0 ? "+" : "") << offset_;
    return os.str();
}

double inf_convolution(const TerminalCondition& tc, double m, double u) {
    if (!(m >= 0.0)) throw std::invalid_argument("inf-convolution needs m >= 0");
    if (m == 0.0) return tc.infimum();
    const double S = tc.sup_norm();
    const double r = 2.0 * S / m + 1.0;
    auto obj = [&](double p) { return tc(p) + m * std::abs(p - u); };

    double best = tc(u);
    for (double bp : tc.breakpoints()) {
        if (std::abs(bp - u) > r) continue;
        const double pen = m * std::abs(bp - u);
        best = std::min({best, tc(bp) + pen, tc.limit(bp, Approach::Left) + pen,
                         tc.limit(bp, Approach::Right) + pen});
    }

    constexpr int n = 256;
    std::array<double, n + 1> vals{};
    double a = u - r, h = 2.0 * r / n;
    for (int i = 0; i <= n; ++i) vals[i] = obj(a + h * i);
    std::array<int, n + 1> idx{};
    for (int i = 0; i <= n; ++i) idx[i] = i;
    std::partial_sort(idx.begin(), idx.begin() + 3, idx.end(),
                      [&](int x, int y) { return vals[x] < vals[y]; });
    for (int c = 0; c < 3; ++c) {
        double center = a + h * idx[c];
        double width = h;
        best = std::min(best, vals[idx[c]]);
        for (int pass = 0; pass < 4; ++pass) {
            double lo = center - width, step = 2.0 * width / n;
            double local = obj(center);
            for (int i = 0; i <= n; ++i) {
                double p = lo + step * i;
                double v = obj(p);
                if (v < local) {
                    local = v;
                    center = p;
                }
            }
            best = std::min(best, local);
            width = step;
        }
    }
    return best;
}

double sup_convolution(const TerminalCondition& tc, double m, double u) {
    return -inf_convolution(tc.negated(), m, u);
}

double uniform_gap_bound(const TerminalCondition& tc, double m) {
    const Regularity reg = tc.regularity();
    const double S = tc.sup_norm();
    if (reg.kind == RegularityKind::Lipschitz) {
        if (reg.lipschitz == 0.0 || S == 0.0) return 0.0;
        if (!(m > 0.0)) return 2.0 * S;
        return std::min(2.0 * S * reg.lipschitz / m, 2.0 * S);
    }
    if (reg.kind == RegularityKind::UniformlyContinuous && !reg.modulus.empty()) {
        if (S == 0.0) return 0.0;
        if (!(m > 0.0)) return 2.0 * S;
        const double need = 2.0 * S / m;  // smallest admissible delta
        for (const auto& e : reg.modulus)
            if (e.delta >= need) return std::min(e.eps, 2.0 * S);
        return 2.0 * S;
    }
    throw NoModulusError("terminal condition " + tc.describe() +
                         " carries no modulus of continuity");
}

TerminalCondition load_tabulated_terminal(const std::string& path) {
    return TerminalCondition::tabulated(read_two_column_csv(path));
}

}  // namespace sqbsde
