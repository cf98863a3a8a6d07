// SPDX-License-Identifier: MIT
#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace sqbsde {

enum class RegularityKind {
    Lipschitz,
    UniformlyContinuous,
    LowerSemiContinuous,
    UpperSemiContinuous,
    Continuous
};

struct ModulusEntry {
    double eps;
    double delta;  // |x - y| <= delta implies |Phi(x) - Phi(y)| <= eps
};

struct Regularity {
    RegularityKind kind = RegularityKind::Continuous;
    double lipschitz = 0.0;
    std::vector<ModulusEntry> modulus;  // increasing in eps
};

enum class Side { Lower, Upper };
enum class Approach { Left, Right };
enum class JumpValue { Lower, Upper };

class Profile {
public:
    virtual ~Profile() = default;
    virtual double eval(double x) const = 0;
    /// One-sided limit at x; differs from eval only at breakpoints.
    virtual double limit(double x, Approach from) const {
        (void)from;
        return eval(x);
    }
    virtual double infimum() const = 0;
    virtual double supremum() const = 0;
    virtual std::vector<double> breakpoints() const { return {}; }
    virtual Regularity regularity() const = 0;
    virtual std::string describe() const = 0;
};

/// Bounded terminal payoff offset + scale * profile(x).
class TerminalCondition {
public:
    static TerminalCondition constant(double c);
    static TerminalCondition cosine(double amplitude = 1.0, double frequency = 1.0);
    static TerminalCondition lorentzian(double amplitude = 1.0, double center = 0.0,
                                        double width = 1.0);
    static TerminalCondition gaussian(double amplitude = 1.0, double center = 0.0,
                                      double width = 1.0);
    static TerminalCondition tanh_profile(double amplitude = 1.0, double width = 1.0);
    static TerminalCondition tabulated(std::vector<std::pair<double, double>> nodes);
    static TerminalCondition step(double jump, double low, double high,
                                  JumpValue at_jump = JumpValue::Lower);
    static TerminalCondition from_profile(std::shared_ptr<const Profile> p);

    TerminalCondition shifted(double a) const;
    TerminalCondition scaled(double k) const;
    TerminalCondition negated() const { return scaled(-1.0); }
    /// Phi_m (Lower) or the sup-convolution (Upper) as a new terminal condition.
    TerminalCondition regularized(double m, Side side) const;
    /// Replaces the regularity record, e.g. to attach a modulus table.
    TerminalCondition with_regularity(Regularity r) const;
    TerminalCondition with_sup_norm(double declared) const;

    double operator()(double x) const { return offset_ + scale_ * profile_->eval(x); }
    double limit(double x, Approach from) const { return offset_ + scale_ * profile_->limit(x, from); }
    double infimum() const;
    double supremum() const;
    double sup_norm() const;
    std::vector<double> breakpoints() const { return profile_->breakpoints(); }
    Regularity regularity() const;
    std::string describe() const;

private:
    std::shared_ptr<const Profile> profile_;
    double offset_ = 0.0;
    double scale_ = 1.0;
    std::shared_ptr<const Regularity> reg_override_;
    double declared_sup_ = -1.0;
};

double inf_convolution(const TerminalCondition& tc, double m, double u);
double sup_convolution(const TerminalCondition& tc, double m, double u);

/// Certified bound on sup_u (Phi(u) - Phi_m(u)) from the modulus of continuity.
double uniform_gap_bound(const TerminalCondition& tc, double m);

/// Two-column CSV (x, Phi) with one header line.
TerminalCondition load_tabulated_terminal(const std::string& path);

}  // namespace sqbsde
