#include "fairdiv/welfare.hpp"

#include <algorithm>
#include <cmath>

namespace fairdiv {

WelfareFn WelfareFn::p_mean(const Rational& p) {
    if (p == 0) return nash();  // the p -> 0 limit is the geometric mean
    Integer d = den(p);
    if (d != 1 && d != 2)
        throw ConfigError("p-mean exponent must be an integer or half-integer for exact comparison");
    return {WelfareKind::p_mean, p};
}

WelfareFn WelfareFn::parse(const std::string& text) {
    if (text == "util" || text == "utilitarian") return utilitarian();
    if (text == "nash") return nash();
    if (text == "egal" || text == "egalitarian") return egalitarian();
    const std::string prefix = "pmean:";
    if (text.rfind(prefix, 0) == 0) return p_mean(rational_from_string(text.substr(prefix.size())));
    throw ConfigError("unknown welfare function: " + text);
}

std::string WelfareFn::name() const {
    switch (kind) {
        case WelfareKind::utilitarian: return "utilitarian";
        case WelfareKind::nash: return "nash";
        case WelfareKind::egalitarian: return "egalitarian";
        case WelfareKind::p_mean: return "pmean:" + to_string(p);
    }
    return "?";
}

bool WelfareFn::pdp_member() const { return kind != WelfareKind::p_mean || p <= 1; }

RadicalSum::RadicalSum(std::vector<std::pair<Rational, Rational>> terms) {
    // Group radicands into square classes: r and r' share a class iff r/r'
    // is the square of a rational, in which case sqrt(r) = s*sqrt(r') with
    // rational s and the coefficients combine.
    for (auto& [coef, rad] : terms) {
        if (coef == 0 || rad == 0) continue;
        if (rad < 0) throw ConfigError("negative radicand");
        Rational root;
        if (perfect_square(rad, &root)) {  // degenerate: a rational term
            bool merged = false;
            for (auto& [c, r] : terms_)
                if (r == 1) {
                    c += coef * root;
                    merged = true;
                    break;
                }
            if (!merged) terms_.emplace_back(coef * root, Rational(1));
            continue;
        }
        bool merged = false;
        for (auto& [c, r] : terms_) {
            Rational ratio_root;
            if (perfect_square(rad / r, &ratio_root)) {
                c += coef * ratio_root;
                merged = true;
                break;
            }
        }
        if (!merged) terms_.emplace_back(coef, rad);
    }
    std::erase_if(terms_, [](const auto& t) { return t.first == 0; });
}

RadicalSum RadicalSum::minus(const RadicalSum& other) const {
    std::vector<std::pair<Rational, Rational>> terms = terms_;
    for (const auto& [c, r] : other.terms_) terms.emplace_back(-c, r);
    return RadicalSum(std::move(terms));
}

int RadicalSum::sign() const {
    if (terms_.empty()) return 0;
    if (terms_.size() == 1) {
        int s = terms_[0].first < 0 ? -1 : 1;  // sqrt(r) > 0
        return s;
    }
    // The canonical form is non-zero, so interval refinement terminates:
    // bound each sqrt(p/q) in [L, L+1]/2^t with L = isqrt(floor(p*4^t/q)).
    for (int t = 32; t <= 4096; t *= 2) {
        Integer scale = Integer(1) << t;
        Rational lo(0), hi(0);
        for (const auto& [c, r] : terms_) {
            Integer L = isqrt(num(r) * scale * scale / den(r));
            Rational root_lo(L, scale), root_hi(L + 1, scale);
            if (c > 0) {
                lo += c * root_lo;
                hi += c * root_hi;
            } else {
                lo += c * root_hi;
                hi += c * root_lo;
            }
        }
        if (lo > 0) return 1;
        if (hi < 0) return -1;
    }
    throw CapExceeded("radical sign refinement exceeded precision cap");
}

double RadicalSum::approx() const {
    double s = 0;
    for (const auto& [c, r] : terms_) s += to_double(c) * std::sqrt(to_double(r));
    return s;
}

namespace {

// sum of u^p terms for half-integer p: u^(a/2) = u^((a-1)/2) * sqrt(u) for
// odd a, so each utility contributes coefficient u^floor(a/2) * sqrt(u).
RadicalSum half_integer_power_sum(const std::vector<Rational>& utilities, long a) {
    std::vector<std::pair<Rational, Rational>> terms;
    for (const auto& u : utilities) {
        long k = a >= 0 ? a / 2 : -((-a + 1) / 2);  // floor(a/2)
        terms.emplace_back(pow_rational(u, k), u);
    }
    return RadicalSum(std::move(terms));
}

}  // namespace

WelfareScore welfare_score(const WelfareFn& f, const std::vector<Rational>& utilities) {
    if (utilities.empty()) throw ConfigError("empty utility vector");
    WelfareScore s;
    switch (f.kind) {
        case WelfareKind::utilitarian: {
            Rational sum(0);
            for (const auto& u : utilities) sum += u;
            s.rat = sum;
            return s;
        }
        case WelfareKind::egalitarian: {
            s.rat = *std::min_element(utilities.begin(), utilities.end());
            return s;
        }
        case WelfareKind::nash: {
            Rational prod(1);
            for (const auto& u : utilities) prod *= u;
            if (prod == 0) {
                s.cls = 0;  // any zero entry bottoms out the geometric mean
                return s;
            }
            s.rat = prod;
            return s;
        }
        case WelfareKind::p_mean: {
            bool has_zero = std::any_of(utilities.begin(), utilities.end(),
                                        [](const Rational& u) { return u == 0; });
            if (f.p < 0 && has_zero) {
                s.cls = 0;  // limit convention: f_p = 0 when p < 0 meets a zero
                return s;
            }
            s.direction = f.p > 0 ? 1 : -1;
            Integer d = den(f.p);
            long a = num(f.p).convert_to<long>();
            if (d == 1) {
                Rational sum(0);
                for (const auto& u : utilities) sum += pow_rational(u, a);
                s.rat = sum;
            } else {
                s.radical = true;
                s.rad = half_integer_power_sum(utilities, a);
            }
            return s;
        }
    }
    throw ConfigError("unknown welfare kind");
}

int compare_scores(const WelfareScore& a, const WelfareScore& b) {
    if (a.cls != b.cls) return a.cls < b.cls ? -1 : 1;
    if (a.cls == 0) return 0;  // all bottom values are equal (= 0)
    int raw;
    if (a.radical || b.radical) {
        if (!a.radical || !b.radical) throw ConfigError("incomparable welfare scores");
        raw = a.rad.minus(b.rad).sign();
    } else {
        raw = a.rat == b.rat ? 0 : (a.rat < b.rat ? -1 : 1);
    }
    return a.direction * raw;
}

WelfareValue welfare_value(const WelfareFn& f, const std::vector<Rational>& utilities) {
    WelfareValue out;
    out.score = welfare_score(f, utilities);
    int n = static_cast<int>(utilities.size());
    switch (f.kind) {
        case WelfareKind::utilitarian: {
            Rational v = out.score.rat / n;
            out.exact = v;
            out.approx = to_double(v);
            return out;
        }
        case WelfareKind::egalitarian: {
            out.exact = out.score.rat;
            out.approx = to_double(out.score.rat);
            return out;
        }
        case WelfareKind::nash: {
            // geometric mean; exact only in lucky cases, report the double
            double prod = out.score.cls == 0 ? 0.0 : to_double(out.score.rat);
            out.approx = std::pow(prod, 1.0 / n);
            if (out.score.cls == 0) out.exact = Rational(0);
            return out;
        }
        case WelfareKind::p_mean: {
            if (out.score.cls == 0) {
                out.exact = Rational(0);
                out.approx = 0;
                return out;
            }
            double sum = out.score.radical ? out.score.rad.approx() : to_double(out.score.rat);
            double p = to_double(f.p);
            out.approx = std::pow(sum / n, 1.0 / p);
            if (!out.score.radical) {
                Rational mean = out.score.rat / n;
                Rational root;
                long a = num(f.p).convert_to<long>();
                if (a == 1) out.exact = mean;
                else if (a == -1) out.exact = 1 / mean;
                else if (a == 2 && perfect_square(mean, &root)) out.exact = root;
            }
            return out;
        }
    }
    throw ConfigError("unknown welfare kind");
}

}  // namespace fairdiv
