#include "onlinecolor/enumerate.hpp"

#include <algorithm>
#include <limits>

#include "onlinecolor/diagnostics.hpp"

namespace onlinecolor {

namespace {

constexpr Time kNever = std::numeric_limits<Time>::max();

struct Branching {
    std::int32_t outcome;
    double probability;
};

class Walker {
public:
    Walker(const Instance& inst, Algorithm alg, const EnumerateOptions& opts, EnumerationReport& rep)
        : inst_(inst), alg_(alg), opts_(opts), rep_(rep) {
        rep_.algorithm = alg;
        rep_.marked_probability.assign(inst.arrivals.size(), 0.0);
    }

    void visit_node() {
        if (++rep_.nodes > opts_.budget)
            throw BudgetExceeded("enumeration exceeded its budget of " + std::to_string(opts_.budget) + " nodes");
    }

    void leaf(double prob, const std::string& tokens, bool failed) {
        ++rep_.leaves;
        rep_.probability_sum += prob;
        if (failed) rep_.failure_probability += prob;
        if (rep_.distribution_truncated) return;
        rep_.distribution[tokens] += prob;
        if (rep_.distribution.size() > opts_.max_distribution) {
            rep_.distribution.clear();
            rep_.distribution_truncated = true;
        }
    }

protected:
    const Instance& inst_;
    Algorithm alg_;
    const EnumerateOptions& opts_;
    EnumerationReport& rep_;
};

std::string append_token(const std::string& tokens, const std::optional<ColorRef>& c) {
    std::string out = tokens;
    if (!out.empty()) out += ' ';
    out += c ? to_string(*c) : std::string("-");
    return out;
}

// ---------------------------------------------------------------------------
// Greedy family: branch uniformly over admissible colors.

class ChoiceWalker : public Walker {
public:
    using Walker::Walker;

    void run() {
        const int palette = alg_ == Algorithm::RandGreedy ? opts_.palette_size : 0;
        if (alg_ == Algorithm::RandGreedy && palette < 1) throw std::invalid_argument("palette_size must be >= 1");
        ColoringState s(inst_.n, palette);
        dfs(s, 0, 1.0, "");
    }

private:
    void dfs(const ColoringState& s, std::size_t i, double prob, const std::string& tokens) {
        visit_node();
        if (i == inst_.arrivals.size()) return leaf(prob, tokens, false);
        const Arrival& a = inst_.arrivals[i];
        if (alg_ == Algorithm::Greedy) {
            ColoringState next = s;
            const ColorRef c = greedy_assign(next, a.edge);
            return dfs(next, i + 1, prob, append_token(tokens, c));
        }
        std::vector<std::int32_t> options;
        if (alg_ == Algorithm::RandGreedy) {
            for (std::int32_t c = 1; c <= opts_.palette_size; ++c)
                if (s.is_free(a.edge, ColorRef::alg(c))) options.push_back(c);
        } else {
            for (std::int32_t c : a.palette)
                if (s.is_free(a.edge, ColorRef::alg(c)) && std::find(options.begin(), options.end(), c) == options.end())
                    options.push_back(c);
        }
        if (options.empty()) {
            // The run stops at its first failure.
            std::string t = append_token(tokens, std::nullopt);
            for (std::size_t k = i + 1; k < inst_.arrivals.size(); ++k) t = append_token(t, std::nullopt);
            return leaf(prob, t, true);
        }
        const double each = prob / static_cast<double>(options.size());
        for (std::int32_t c : options) {
            ColoringState next = s;
            next.assign(a.edge, ColorRef::alg(c));
            dfs(next, i + 1, each, append_token(tokens, ColorRef::alg(c)));
        }
    }
};

// ---------------------------------------------------------------------------
// Algorithms 1 and 2, with exact martingale checks at every node.

class ProbWalker : public Walker {
public:
    ProbWalker(const Instance& inst, Algorithm alg, const Params& params, const EnumerateOptions& opts,
               EnumerationReport& rep)
        : Walker(inst, alg, opts, rep), params_(params) {
        const int n = inst.n;
        for (VertexId a = 0; a < n; ++a)
            for (VertexId b = a + 1; b < n; ++b) pairs_.emplace_back(a, b);
        arrival_.assign(pairs_.size(), kNever);
        for (std::size_t i = 0; i < inst.arrivals.size(); ++i)
            arrival_[pair_index(inst.arrivals[i].edge)] = static_cast<Time>(i + 1);
    }

    void run() {
        ProbabilisticColorer eng(params_,
                                 alg_ == Algorithm::Alg1 ? ProbabilisticColorer::Variant::Alg1
                                                         : ProbabilisticColorer::Variant::Alg2,
                                 true);
        Track track(pairs_.size());
        dfs(eng, track, 1.0, "");
    }

private:
    // Running Y, good-step drift and non-good change per potential edge.
    struct Track {
        explicit Track(std::size_t k) : y(k, 0.0), drift(k, 0.0), rest(k, 0.0) {}
        std::vector<double> y, drift, rest;
    };

    std::size_t pair_index(const Edge& e) const {
        const auto n = static_cast<std::size_t>(inst_.n);
        const auto u = static_cast<std::size_t>(e.u), v = static_cast<std::size_t>(e.v);
        return u * n - u * (u + 1) / 2 + (v - u - 1);
    }

    static double total(const std::vector<double>& p) {
        double s = 0.0;
        for (double x : p) s += x;
        return s;
    }

    void dfs(const ProbabilisticColorer& eng, const Track& track, double prob, const std::string& tokens) {
        visit_node();
        const Time t = eng.time();
        if (static_cast<std::size_t>(t) == inst_.arrivals.size()) return leaf(prob, tokens, false);
        const Edge e = inst_.arrivals[static_cast<std::size_t>(t)].edge;
        const auto d = eng.prepare(e);

        std::vector<Branching> branches;
        if (d.branch == Branch::Sampled) {
            for (std::size_t c = 0; c < d.pvec.size(); ++c)
                if (d.pvec[c] > 0.0) branches.push_back({static_cast<std::int32_t>(c + 1), d.pvec[c]});
            if (1.0 - d.z > 0.0) branches.push_back({kBottom, 1.0 - d.z});
        } else {
            branches.push_back({kBottom, 1.0});
        }

        const std::size_t delta = static_cast<std::size_t>(params_.delta);
        const bool good = !d.u_bad && !d.v_bad;
        // P^{(t)} for every potential edge not yet arrived; per-branch
        // successors for those incident to e.
        std::vector<std::vector<double>> now(pairs_.size());
        std::vector<std::vector<std::vector<double>>> after(pairs_.size()), after_bar(pairs_.size());
        for (std::size_t k = 0; k < pairs_.size(); ++k) {
            if (arrival_[k] <= t) continue;
            now[k] = eng.table().reconstruct(pairs_[k]);
            if (!opts_.martingale_checks) continue;
            const double z = total(now[k]);
            const double expect = 1.0 - params_.eps + track.y[k] - track.drift[k] + track.rest[k];
            rep_.max_decomposition_error = std::max(rep_.max_decomposition_error, std::abs(z - expect));
            if (arrival_[k] == t + 1 || !pairs_[k].intersects(e)) continue;
            for (const auto& br : branches) {
                std::vector<double> nx(delta), bar(delta);
                step(now[k], d, br.outcome, nx, bar);
                after[k].push_back(std::move(nx));
                after_bar[k].push_back(std::move(bar));
            }
        }

        if (opts_.martingale_checks) {
            check_drifts(now, after, after_bar, branches, good, t);
            check_q(eng, now, after, branches, e, t);
        }

        for (std::size_t b = 0; b < branches.size(); ++b) {
            ProbabilisticColorer next = eng;
            const auto& rec = next.commit(d, branches[b].outcome);
            const double p = prob * branches[b].probability;
            if (rec.marked()) rep_.marked_probability[static_cast<std::size_t>(t)] += p;
            Track tr = track;
            if (opts_.martingale_checks) {
                for (std::size_t k = 0; k < pairs_.size(); ++k) {
                    if (after[k].empty()) continue;
                    const double z0 = total(now[k]), z1 = total(after[k][b]);
                    if (good) {
                        const double zb = total(after_bar[k][b]);
                        tr.y[k] += zb - z0;
                        tr.drift[k] += zb - z1;
                    } else {
                        tr.rest[k] += z1 - z0;
                    }
                }
            }
            dfs(next, tr, p, append_token(tokens, rec.color));
        }
    }

    void step(const std::vector<double>& prev, const ProbabilisticColorer::Decision& d, std::int32_t outcome,
              std::vector<double>& nx, std::vector<double>& bar) const {
        switch (d.branch) {
            case Branch::Sampled:
                step_with_overline(prev, EventKind::Sample, outcome, d.pvec, params_.cap, nx, bar);
                break;
            case Branch::BadColored:
                step_with_overline(prev, EventKind::Burn, d.bad_color, {}, params_.cap, nx, bar);
                break;
            default:
                nx = prev;
                bar = prev;
        }
    }

    void check_drifts(const std::vector<std::vector<double>>& now,
                      const std::vector<std::vector<std::vector<double>>>& after,
                      const std::vector<std::vector<std::vector<double>>>& after_bar,
                      const std::vector<Branching>& branches, bool good, Time) {
        for (std::size_t k = 0; k < pairs_.size(); ++k) {
            if (after[k].empty()) continue;
            ++rep_.checked_pairs;
            const double z0 = total(now[k]);
            double ez = 0.0, ey = 0.0;
            for (std::size_t b = 0; b < branches.size(); ++b) {
                const double dz = total(after[k][b]) - z0;
                const double dy = good ? total(after_bar[k][b]) - z0 : 0.0;
                ez += branches[b].probability * dz;
                ey += branches[b].probability * dy;
                rep_.max_abs_z_step = std::max(rep_.max_abs_z_step, std::abs(dz));
                rep_.max_abs_y_step = std::max(rep_.max_abs_y_step, std::abs(dy));
            }
            rep_.max_z_drift = std::max(rep_.max_z_drift, ez);
            rep_.max_abs_y_drift = std::max(rep_.max_abs_y_drift, std::abs(ey));
        }
    }

    // Q_{U_w c} for every potential edge e' not arriving by t+1 and each
    // endpoint w, where U_w lists the instance arrivals at w before e'.
    void check_q(const ProbabilisticColorer& eng, const std::vector<std::vector<double>>& now,
                 const std::vector<std::vector<std::vector<double>>>& after, const std::vector<Branching>& branches,
                 const Edge& e, Time t) {
        const std::size_t delta = static_cast<std::size_t>(params_.delta);
        const auto& records = eng.records();
        std::vector<double> q_now(delta), prod_t(delta), prod_next(delta);
        std::vector<std::vector<double>> q_after(branches.size(), std::vector<double>(delta));
        for (std::size_t k = 0; k < pairs_.size(); ++k) {
            const Time t_e = arrival_[k];
            if (t_e <= t + 1) continue;
            const Edge& ep = pairs_[k];
            for (VertexId w : {ep.u, ep.v}) {
                std::fill(q_now.begin(), q_now.end(), 0.0);
                // Products over U_w arrivals up to t and up to t + 1.
                std::fill(prod_t.begin(), prod_t.end(), 1.0);
                std::fill(prod_next.begin(), prod_next.end(), 1.0);
                for (auto& q : q_after) std::fill(q.begin(), q.end(), 0.0);
                for (std::size_t i = 0; i < inst_.arrivals.size(); ++i) {
                    const Time t_f = static_cast<Time>(i + 1);
                    if (t_f >= t_e) break;
                    const Edge& f = inst_.arrivals[i].edge;
                    if (!f.touches(w)) continue;
                    if (t_f <= t + 1) {
                        // R frozen at t_f - 1: the same before and after this step.
                        const auto& pf = t_f <= t ? records[i].pvec : now[pair_index(f)];
                        for (std::size_t c = 0; c < delta; ++c) {
                            const double r = pf[c] * prod_t[c];
                            q_now[c] += r;
                            for (auto& q : q_after) q[c] += r;
                            if (t_f <= t) prod_t[c] *= 1.0 - pf[c];
                            prod_next[c] *= 1.0 - pf[c];
                        }
                        continue;
                    }
                    const std::size_t fk = pair_index(f);
                    for (std::size_t c = 0; c < delta; ++c) {
                        q_now[c] += now[fk][c] * prod_t[c];
                        for (std::size_t b = 0; b < branches.size(); ++b) {
                            const double pf = after[fk].empty() ? now[fk][c] : after[fk][b][c];
                            q_after[b][c] += pf * prod_next[c];
                        }
                    }
                }
                for (std::size_t c = 0; c < delta; ++c) {
                    double eq = 0.0;
                    for (std::size_t b = 0; b < branches.size(); ++b)
                        eq += branches[b].probability * (q_after[b][c] - q_now[c]);
                    rep_.max_q_drift = std::max(rep_.max_q_drift, eq);
                }
                if (!e.touches(w)) {
                    for (std::size_t b = 0; b < branches.size(); ++b) {
                        double pos = 0.0, neg = 0.0;
                        for (std::size_t c = 0; c < delta; ++c) {
                            const double dq = q_after[b][c] - q_now[c];
                            (dq > 0 ? pos : neg) += dq;
                        }
                        rep_.max_abs_dq_step = std::max({rep_.max_abs_dq_step, pos, -neg});
                    }
                }
            }
        }
    }

    Params params_;
    std::vector<Edge> pairs_;
    std::vector<Time> arrival_;
};

}  // namespace

EnumerationReport enumerate_exact(const Instance& instance, Algorithm algorithm, const Params* params,
                                  const EnumerateOptions& opts) {
    EnumerationReport rep;
    StreamAuditor audit(instance.n, instance.delta);
    for (const auto& a : instance.arrivals) audit.admit(a);
    if (algorithm == Algorithm::Alg1 || algorithm == Algorithm::Alg2) {
        if (params == nullptr) throw InvalidParams("Alg1/Alg2 enumeration needs params");
        params->require_valid();
        if (params->n < instance.n || params->delta < instance.delta)
            throw InvalidParams("params do not cover the instance");
        Params p = *params;
        p.n = instance.n;
        ProbWalker(instance, algorithm, p, opts, rep).run();
    } else {
        ChoiceWalker(instance, algorithm, opts, rep).run();
    }
    return rep;
}

}  // namespace onlinecolor
