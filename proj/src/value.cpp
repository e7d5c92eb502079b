#include "flmpc/value.hpp"

#include <sstream>

#include "flmpc/errors.hpp"

namespace flmpc {

namespace {

void put_rational_vector(std::ostringstream& out, const RationalVector& w) {
    out << w.size();
    for (const auto& r : w) out << ' ' << r.str();
}

struct CanonVisitor {
    std::string operator()(const Bottom&) const { return netstring("_"); }

    std::string operator()(const Ack&) const { return netstring("ack"); }

    std::string operator()(const FieldVector& v) const {
        std::ostringstream out;
        out << "f " << v.modulus() << ' ' << v.dim();
        for (std::size_t i = 0; i < v.dim(); ++i) out << ' ' << v[i];
        return netstring(out.str());
    }

    std::string operator()(const RationalVector& w) const {
        std::ostringstream out;
        out << "w ";
        put_rational_vector(out, w);
        return netstring(out.str());
    }

    std::string operator()(const ClientDataset& d) const {
        std::ostringstream out;
        out << "data " << d.owner << ' ' << d.examples.size();
        for (const auto& ex : d.examples) {
            out << " |";
            for (const auto& f : ex.features) out << ' ' << f.str();
            out << " ; " << ex.label.str();
        }
        return netstring(out.str());
    }

    std::string operator()(const SysParam& sp) const {
        std::ostringstream out;
        out << "sys " << sp.round << ' ' << sp.modulus << ' ' << sp.scale << ' '
            << sp.program << ' ';
        put_rational_vector(out, sp.weights);
        return netstring(out.str());
    }

    std::string operator()(const MaskList& masks) const {
        std::ostringstream out;
        out << "masks " << masks.size();
        for (const auto& m : masks) {
            out << " | " << m.low << ' ' << m.high << ' ' << m.pad.modulus() << ' '
                << m.pad.dim();
            for (std::size_t i = 0; i < m.pad.dim(); ++i) out << ' ' << m.pad[i];
        }
        return netstring(out.str());
    }

    std::string operator()(const Trajectory& t) const {
        std::ostringstream out;
        out << "traj " << t.models.size();
        for (const auto& w : t.models) {
            out << " | ";
            put_rational_vector(out, w);
        }
        return netstring(out.str());
    }
};

} // namespace

std::string canon(const Value& v) { return std::visit(CanonVisitor{}, v); }

std::string canon_values(const std::vector<Value>& vs) {
    std::string out = netstring("tuple " + std::to_string(vs.size()));
    for (const auto& v : vs) out += canon(v);
    return out;
}

namespace {

std::string netstring_payload(const std::string& text) {
    std::size_t colon = text.find(':');
    if (colon == std::string::npos) throw TranscriptError("malformed value encoding");
    std::size_t len = 0;
    try {
        len = (std::size_t)std::stoull(text.substr(0, colon));
    } catch (const std::exception&) {
        throw TranscriptError("malformed value length prefix");
    }
    if (text.size() != colon + 1 + len + 1 || text.back() != ',')
        throw TranscriptError("value encoding length mismatch");
    return text.substr(colon + 1, len);
}

std::vector<std::string> split_tokens(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

class TokenReader {
public:
    explicit TokenReader(const std::string& s) : tokens_(split_tokens(s)) {}

    const std::string& next() {
        if (pos_ >= tokens_.size()) throw TranscriptError("truncated value encoding");
        return tokens_[pos_++];
    }
    std::uint64_t next_u64() {
        try {
            return std::stoull(next());
        } catch (const std::exception&) {
            throw TranscriptError("expected an integer in value encoding");
        }
    }
    std::int64_t next_i64() {
        try {
            return std::stoll(next());
        } catch (const std::exception&) {
            throw TranscriptError("expected an integer in value encoding");
        }
    }
    Rational next_rational() {
        try {
            return Rational::parse(next());
        } catch (const std::exception&) {
            throw TranscriptError("expected a rational in value encoding");
        }
    }
    bool done() const { return pos_ >= tokens_.size(); }
    void expect(const std::string& tok) {
        if (next() != tok) throw TranscriptError("unexpected token in value encoding");
    }

private:
    std::vector<std::string> tokens_;
    std::size_t pos_ = 0;
};

RationalVector read_rational_vector(TokenReader& in) {
    std::size_t n = in.next_u64();
    RationalVector w;
    w.reserve(n);
    for (std::size_t i = 0; i < n; ++i) w.push_back(in.next_rational());
    return w;
}

} // namespace

Value parse_value_canon(const std::string& text) {
    TokenReader in(netstring_payload(text));
    const std::string tag = in.next();
    Value out;
    if (tag == "_") {
        out = Bottom{};
    } else if (tag == "ack") {
        out = Ack{};
    } else if (tag == "f") {
        std::uint32_t q = (std::uint32_t)in.next_u64();
        std::size_t d = in.next_u64();
        FieldVector v(q, d);
        for (std::size_t i = 0; i < d; ++i) v.set(i, (std::uint32_t)in.next_u64());
        out = v;
    } else if (tag == "w") {
        out = read_rational_vector(in);
    } else if (tag == "data") {
        ClientDataset ds;
        ds.owner = (int)in.next_i64();
        std::size_t n = in.next_u64();
        for (std::size_t i = 0; i < n; ++i) {
            in.expect("|");
            Example ex;
            for (std::string tok = in.next(); tok != ";"; tok = in.next())
                ex.features.push_back(Rational::parse(tok));
            ex.label = in.next_rational();
            ds.examples.push_back(std::move(ex));
        }
        out = ds;
    } else if (tag == "sys") {
        SysParam sp;
        sp.round = (std::uint32_t)in.next_u64();
        sp.modulus = (std::uint32_t)in.next_u64();
        sp.scale = (std::uint32_t)in.next_u64();
        sp.program = in.next();
        sp.weights = read_rational_vector(in);
        out = sp;
    } else if (tag == "masks") {
        MaskList masks;
        std::size_t n = in.next_u64();
        for (std::size_t i = 0; i < n; ++i) {
            in.expect("|");
            MaskShare share;
            share.low = (int)in.next_i64();
            share.high = (int)in.next_i64();
            std::uint32_t q = (std::uint32_t)in.next_u64();
            std::size_t d = in.next_u64();
            FieldVector pad(q, d);
            for (std::size_t c = 0; c < d; ++c) pad.set(c, (std::uint32_t)in.next_u64());
            share.pad = std::move(pad);
            masks.push_back(std::move(share));
        }
        out = masks;
    } else if (tag == "traj") {
        Trajectory t;
        std::size_t n = in.next_u64();
        for (std::size_t i = 0; i < n; ++i) {
            in.expect("|");
            t.models.push_back(read_rational_vector(in));
        }
        out = t;
    } else {
        throw TranscriptError("unknown value tag '" + tag + "'");
    }
    if (canon(out) != text) throw TranscriptError("non-canonical value encoding");
    return out;
}

} // namespace flmpc
