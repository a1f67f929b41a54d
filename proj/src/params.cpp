#include "onlinecolor/params.hpp"

#include <cmath>

#include "onlinecolor/types.hpp"

namespace onlinecolor {

double default_eps(double ln_n, double delta, AdversaryMode mode) {
    const double scale = mode == AdversaryMode::Adaptive ? ln_n : std::sqrt(ln_n);
    return kCEps * std::pow(scale / delta, 1.0 / 16.0);
}

double default_cap(double eps, double delta) { return kCA / (eps * eps * delta); }

Params derive_params(int n, int delta, AdversaryMode mode, const ParamOverrides& overrides) {
    if (n < 2) throw InvalidParams("n must be >= 2");
    if (delta < 1) throw InvalidParams("delta must be >= 1");

    Params p;
    p.n = n;
    p.delta = delta;
    p.mode = mode;
    p.eps = overrides.eps.value_or(default_eps(std::log(static_cast<double>(n)), delta, mode));
    p.cap = overrides.cap.value_or(default_cap(p.eps, delta));
    p.alpha = overrides.alpha.value_or(p.eps * p.eps * p.eps / 100.0);
    p.badness_threshold = overrides.badness_threshold.value_or(2.0 * p.c_k * p.eps * delta);
    p.dangerous_threshold = overrides.dangerous_threshold.value_or(p.alpha * delta);

    if (!(p.eps > 0.0 && p.eps < 1.0)) {
        p.invalid_reason = "eps = " + std::to_string(p.eps) + " outside (0,1)";
        if (!overrides.eps) p.invalid_reason += "; supply an eps override";
    } else if (!(p.cap > 0.0)) {
        p.invalid_reason = "cap must be positive";
    } else if (p.alpha < 0.0) {
        p.invalid_reason = "alpha must be non-negative";
    } else if (!(p.badness_threshold > 0.0) || !(p.dangerous_threshold > 0.0)) {
        p.invalid_reason = "thresholds must be positive";
    }
    return p;
}

const Params& Params::require_valid() const {
    if (!valid()) throw InvalidParams(invalid_reason);
    return *this;
}

std::string to_string(AdversaryMode m) { return m == AdversaryMode::Adaptive ? "adaptive" : "oblivious"; }

AdversaryMode parse_mode(const std::string& s) {
    if (s == "adaptive") return AdversaryMode::Adaptive;
    if (s == "oblivious") return AdversaryMode::Oblivious;
    throw InvalidParams("unknown mode '" + s + "'");
}

}  // namespace onlinecolor
