#include "onlinecolor/stream.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace onlinecolor {

std::vector<Edge> ObliviousStream::edges() const {
    std::vector<Edge> out;
    out.reserve(arrivals_.size());
    for (const auto& a : arrivals_) out.push_back(a.edge);
    return out;
}

bool ObliviousStream::has_palettes() const {
    for (const auto& a : arrivals_)
        if (!a.palette.empty()) return true;
    return false;
}

void StreamAuditor::admit(const Arrival& a) {
    const auto n = static_cast<VertexId>(degree_.size());
    const Edge& e = a.edge;
    if (e.u < 0 || e.v >= n) throw StreamViolation("edge " + to_string(e) + " has a vertex outside [0, n)");
    if (e.u == e.v) throw StreamViolation("self-loop at vertex " + std::to_string(e.u));
    if (seen_.count(e)) throw StreamViolation("duplicate edge " + to_string(e));
    for (VertexId x : {e.u, e.v})
        if (degree_[static_cast<std::size_t>(x)] >= delta_)
            throw StreamViolation("vertex " + std::to_string(x) + " exceeds max degree " + std::to_string(delta_));
    // Rejected arrivals leave no trace.
    seen_.insert(e);
    ++degree_[static_cast<std::size_t>(e.u)];
    ++degree_[static_cast<std::size_t>(e.v)];
}

void write_instance(std::ostream& os, const Instance& inst) {
    os << inst.n << ' ' << inst.delta << '\n';
    for (const auto& a : inst.arrivals) {
        os << a.edge.u << ' ' << a.edge.v;
        if (!a.palette.empty()) {
            os << " palette:";
            for (std::size_t i = 0; i < a.palette.size(); ++i) os << (i ? "," : "") << a.palette[i];
        }
        os << '\n';
    }
}

std::string write_instance(const Instance& inst) {
    std::ostringstream os;
    write_instance(os, inst);
    return os.str();
}

namespace {

template <class T>
T parse_int(std::string_view tok, std::size_t line) {
    T value{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw FormatError("line " + std::to_string(line) + ": bad integer '" + std::string(tok) + "'");
    return value;
}

}  // namespace

Instance read_instance(std::istream& is) {
    Instance inst;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::vector<std::string> toks;
        for (std::string t; ls >> t;) toks.push_back(t);
        if (!have_header) {
            if (toks.size() != 2) throw FormatError("line " + std::to_string(lineno) + ": expected header 'n delta'");
            inst.n = parse_int<int>(toks[0], lineno);
            inst.delta = parse_int<int>(toks[1], lineno);
            if (inst.n < 0 || inst.delta < 0) throw FormatError("negative header value");
            have_header = true;
            continue;
        }
        if (toks.size() != 2 && toks.size() != 3)
            throw FormatError("line " + std::to_string(lineno) + ": expected 'u v [palette:...]'");
        Arrival a;
        const auto u = parse_int<VertexId>(toks[0], lineno);
        const auto v = parse_int<VertexId>(toks[1], lineno);
        if (u < 0 || v < 0 || u >= inst.n || v >= inst.n || u == v)
            throw FormatError("line " + std::to_string(lineno) + ": invalid edge");
        a.edge = Edge(u, v);
        if (toks.size() == 3) {
            std::string_view pal = toks[2];
            constexpr std::string_view prefix = "palette:";
            if (pal.substr(0, prefix.size()) != prefix || pal.size() == prefix.size())
                throw FormatError("line " + std::to_string(lineno) + ": expected 'palette:c1,c2,...'");
            pal.remove_prefix(prefix.size());
            while (true) {
                auto comma = pal.find(',');
                a.palette.push_back(parse_int<std::int32_t>(pal.substr(0, comma), lineno));
                if (a.palette.back() < 1) throw FormatError("line " + std::to_string(lineno) + ": colors are >= 1");
                if (comma == std::string_view::npos) break;
                pal.remove_prefix(comma + 1);
            }
        }
        inst.arrivals.push_back(std::move(a));
    }
    if (!have_header) throw FormatError("missing header");
    return inst;
}

Instance read_instance_string(const std::string& text) {
    std::istringstream is(text);
    return read_instance(is);
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open instance file " + path);
    return read_instance(in);
}

void save_instance(const std::string& path, const Instance& inst) {
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot write instance file " + path);
    write_instance(out, inst);
}

Instance to_instance(ObliviousStream& s) {
    return Instance{s.n(), s.delta(), s.arrivals()};
}

}  // namespace onlinecolor
