#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "onlinecolor/types.hpp"

namespace onlinecolor {

/// One online arrival. `palette` is non-empty only for list instances.
struct Arrival {
    Edge edge;
    std::vector<std::int32_t> palette;

    friend bool operator==(const Arrival&, const Arrival&) = default;
};

/// What an adaptive adversary may observe: realized colors, in arrival
/// order. A missing color means the colorer failed on that edge.
struct PublicHistory {
    struct Entry {
        Edge edge;
        std::optional<ColorRef> color;
    };
    std::vector<Entry> entries;

    std::size_t size() const { return entries.size(); }
};

/// Source of online edges. Implementations must be pure functions of the
/// observed history (plus their own seeded state), restartable via reset().
class ArrivalStream {
public:
    ArrivalStream(int n, int delta) : n_(n), delta_(delta) {}
    virtual ~ArrivalStream() = default;

    int n() const { return n_; }
    int delta() const { return delta_; }
    virtual bool oblivious() const = 0;
    virtual void reset() = 0;
    virtual std::optional<Arrival> next(const PublicHistory& history) = 0;

private:
    int n_;
    int delta_;
};

/// Fixed graph and order, chosen in advance.
class ObliviousStream final : public ArrivalStream {
public:
    ObliviousStream(int n, int delta, std::vector<Arrival> arrivals)
        : ArrivalStream(n, delta), arrivals_(std::move(arrivals)) {}

    bool oblivious() const override { return true; }
    void reset() override { pos_ = 0; }
    std::optional<Arrival> next(const PublicHistory&) override {
        if (pos_ >= arrivals_.size()) return std::nullopt;
        return arrivals_[pos_++];
    }

    const std::vector<Arrival>& arrivals() const { return arrivals_; }
    std::vector<Edge> edges() const;
    bool has_palettes() const;

private:
    std::vector<Arrival> arrivals_;
    std::size_t pos_ = 0;
};

/// History-observing generator. The generator must depend only on the
/// history it is handed.
class AdaptiveStream final : public ArrivalStream {
public:
    using Generator = std::function<std::optional<Arrival>(const PublicHistory&)>;

    AdaptiveStream(int n, int delta, Generator gen) : ArrivalStream(n, delta), gen_(std::move(gen)) {}

    bool oblivious() const override { return false; }
    void reset() override {}
    std::optional<Arrival> next(const PublicHistory& h) override { return gen_(h); }

private:
    Generator gen_;
};

/// Rejects arrivals that would make the stream non-simple or exceed the
/// declared maximum degree. Throws StreamViolation.
class StreamAuditor {
public:
    StreamAuditor(int n, int delta) : delta_(delta), degree_(static_cast<std::size_t>(n), 0) {}
    void admit(const Arrival& a);
    int degree(VertexId x) const { return degree_[static_cast<std::size_t>(x)]; }

private:
    int delta_;
    std::vector<int> degree_;
    std::unordered_set<Edge, EdgeHash> seen_;
};

/// Instance file: `n delta` header, then one `u v` or
/// `u v palette:c1,c2,...` line per edge in arrival order.
struct Instance {
    int n = 0;
    int delta = 0;
    std::vector<Arrival> arrivals;

    ObliviousStream stream() const { return ObliviousStream(n, delta, arrivals); }
    friend bool operator==(const Instance&, const Instance&) = default;
};

std::string write_instance(const Instance& inst);
void write_instance(std::ostream& os, const Instance& inst);
/// Throws FormatError on malformed input.
Instance read_instance(std::istream& is);
Instance read_instance_string(const std::string& text);
Instance load_instance(const std::string& path);
void save_instance(const std::string& path, const Instance& inst);

/// Drains an oblivious stream into an Instance.
Instance to_instance(ObliviousStream& s);

}  // namespace onlinecolor
