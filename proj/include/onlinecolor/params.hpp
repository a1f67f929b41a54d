#pragma once

#include <optional>
#include <string>

namespace onlinecolor {

enum class AdversaryMode { Adaptive, Oblivious };

inline constexpr double kCEps = 10.0;
inline constexpr double kCA = 4.0;
inline constexpr double kCK = 35.0 * kCA * kCA;  // 560

struct ParamOverrides {
    std::optional<double> eps;
    std::optional<double> cap;
    std::optional<double> alpha;
    std::optional<double> badness_threshold;
    std::optional<double> dangerous_threshold;
};

/// Algorithm parameters. Defaults follow the analysis regime; at desk scale
/// the derived eps exceeds 1, so runs normally carry an eps override.
struct Params {
    int n = 2;
    int delta = 1;
    AdversaryMode mode = AdversaryMode::Adaptive;
    double eps = 0.0;
    double cap = 0.0;
    double alpha = 0.0;
    double badness_threshold = 0.0;    // bad iff badness >= this
    double dangerous_threshold = 0.0;  // dangerous iff baddeg >= this
    double c_eps = kCEps;
    double c_a = kCA;
    double c_k = kCK;
    /// Empty when usable; otherwise why not.
    std::string invalid_reason;

    bool valid() const { return invalid_reason.empty(); }
    /// Throws InvalidParams unless valid().
    const Params& require_valid() const;
    /// Initial P value, (1 - eps) / delta.
    double initial_p() const { return (1.0 - eps) / delta; }

    friend bool operator==(const Params&, const Params&) = default;
};

/// eps = c_eps * (L / delta)^(1/16), with L = ln n (adaptive) or sqrt(ln n)
/// (oblivious).
double default_eps(double ln_n, double delta, AdversaryMode mode);
/// cap = c_A / (eps^2 delta)
double default_cap(double eps, double delta);

Params derive_params(int n, int delta, AdversaryMode mode, const ParamOverrides& overrides = {});

std::string to_string(AdversaryMode m);
AdversaryMode parse_mode(const std::string& s);

}  // namespace onlinecolor
