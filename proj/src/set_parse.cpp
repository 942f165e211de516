// Recursive-descent parser for the set-expression grammar:
//
//   all | empty | odd | ap(r,m) | per(L;{x,...}) | val(p,{e,...}) | val(p,ap(a,d),K)
//   | mval((p,{...}),...) | balpha(bits|p/q,K) | squares | pt(t)
//   | rt(t;p1,p2,...) | rt(t;default) | taudiv | slice(expr,p) | scale(a,expr)
//   | union(e,...) | inter(e,...) | comp(e)

#include <cctype>
#include <limits>
#include <set>

#include "buckdens/set_expr.hpp"

namespace buckdens {

namespace {

enum class Tok { Ident, Int, Punct, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t b = i;
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
            out.push_back({Tok::Ident, std::string(s.substr(b, i - b)), b});
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t b = i;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            out.push_back({Tok::Int, std::string(s.substr(b, i - b)), b});
        } else if (std::string_view("(),{};/").find(c) != std::string_view::npos) {
            out.push_back({Tok::Punct, std::string(1, c), i});
            ++i;
        } else {
            throw ParseError("unexpected character", i, std::string(1, c));
        }
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

    SetExpr parse_all() {
        SetExpr e = expr();
        if (peek().kind != Tok::End) fail("trailing input");
        return e;
    }

private:
    const Token& peek() const { return tokens_[at_]; }
    const Token& next() { return tokens_[at_++]; }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, peek().pos, peek().text); }

    bool accept(const char* punct) {
        if (peek().kind == Tok::Punct && peek().text == punct) {
            ++at_;
            return true;
        }
        return false;
    }
    void expect(const char* punct) {
        if (!accept(punct)) fail(std::string("expected '") + punct + "'");
    }

    Natural integer() {
        if (peek().kind != Tok::Int) fail("expected an integer");
        const Token& t = peek();
        try {
            std::size_t used = 0;
            const Natural v = std::stoull(t.text, &used);
            ++at_;
            return v;
        } catch (const std::out_of_range&) {
            fail("integer out of range");
        }
    }

    unsigned small_integer() {
        const std::size_t pos = peek().pos;
        const std::string text = peek().text;
        const Natural v = integer();
        if (v > std::numeric_limits<unsigned>::max()) throw ParseError("integer too large", pos, text);
        return static_cast<unsigned>(v);
    }

    ExponentSet exponent_set() {
        if (accept("{")) {
            std::vector<unsigned> es;
            if (!accept("}")) {
                do es.push_back(small_integer());
                while (accept(","));
                expect("}");
            }
            return ExponentSet::list(std::move(es));
        }
        if (peek().kind == Tok::Ident && peek().text == "ap") {
            ++at_;
            expect("(");
            const unsigned a = small_integer();
            expect(",");
            const unsigned d = small_integer();
            expect(")");
            expect(",");
            const unsigned K = small_integer();
            return ExponentSet::progression(a, d, K);
        }
        fail("expected an exponent set '{...}' or 'ap(a,d),K'");
    }

    std::vector<SetExpr> expr_list() {
        std::vector<SetExpr> xs;
        do xs.push_back(expr());
        while (accept(","));
        return xs;
    }

    SetExpr expr() {
        const Token head = peek();
        if (head.kind != Tok::Ident) fail("expected a set expression");
        ++at_;
        try {
            return build(head);
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(e.what(), head.pos, head.text);
        }
    }

    SetExpr build(const Token& head) {
        const std::string& name = head.text;
        if (name == "all") return SetExpr::all();
        if (name == "empty") return SetExpr::empty();
        if (name == "odd") return SetExpr::odd();
        if (name == "squares") return SetExpr::squares();
        if (name == "taudiv") return SetExpr::tau_divides();
        static const std::set<std::string, std::less<>> kWithArgs = {
            "ap", "per", "val", "mval", "balpha", "pt", "rt", "slice", "scale", "union", "inter", "comp"};
        if (!kWithArgs.contains(name)) throw ParseError("unknown set constructor", head.pos, head.text);

        expect("(");
        SetExpr out = SetExpr::empty();
        if (name == "ap") {
            const Natural r = integer();
            expect(",");
            const Natural m = integer();
            out = SetExpr::ap(r, m);
        } else if (name == "per") {
            const Natural L = integer();
            expect(";");
            expect("{");
            std::vector<Natural> residues;
            if (!accept("}")) {
                do {
                    const Natural r = integer();
                    if (r >= L) throw DomainError("per residues must be below the period");
                    residues.push_back(r);
                } while (accept(","));
                expect("}");
            }
            if (L == 0) throw DomainError("period must be >= 1");
            out = SetExpr::periodic(PeriodicSet::from_residues(L, residues));
        } else if (name == "val") {
            const Natural p = integer();
            expect(",");
            out = SetExpr::valuation(p, exponent_set());
        } else if (name == "mval") {
            std::vector<ValuationSpec> fs;
            do {
                expect("(");
                const Natural p = integer();
                expect(",");
                fs.push_back({p, exponent_set()});
                expect(")");
            } while (accept(","));
            out = SetExpr::multi_valuation(std::move(fs));
        } else if (name == "balpha") {
            if (peek().kind != Tok::Int) fail("expected binary digits or p/q");
            const std::string first = peek().text;
            ++at_;
            if (accept("/")) {
                const std::string den = peek().text;
                integer();
                const Rational alpha = Rational::parse(first + "/" + den);
                expect(",");
                out = SetExpr::balpha(DyadicDigits::from_ratio(alpha, small_integer()));
            } else {
                expect(",");
                out = SetExpr::balpha(DyadicDigits::from_bits(first, small_integer()));
            }
        } else if (name == "pt") {
            out = SetExpr::pt_max(small_integer());
        } else if (name == "rt") {
            const unsigned t = small_integer();
            expect(";");
            if (peek().kind == Tok::Ident && peek().text == "default") {
                ++at_;
                out = SetExpr::rt_max(t, PrimeList::standard());
            } else {
                std::vector<Natural> ps;
                do ps.push_back(integer());
                while (accept(","));
                out = SetExpr::rt_max(t, PrimeList::of(std::move(ps)));
            }
        } else if (name == "slice") {
            SetExpr inner = expr();
            expect(",");
            out = SetExpr::p_slice(std::move(inner), integer());
        } else if (name == "scale") {
            const Natural a = integer();
            expect(",");
            out = SetExpr::scale(a, expr());
        } else if (name == "union") {
            out = SetExpr::unite(expr_list());
        } else if (name == "inter") {
            out = SetExpr::intersect(expr_list());
        } else if (name == "comp") {
            out = SetExpr::complement(expr());
        }
        expect(")");
        return out;
    }

    std::vector<Token> tokens_;
    std::size_t at_ = 0;
};

} // namespace

SetExpr SetExpr::parse(std::string_view text) { return Parser(text).parse_all(); }

} // namespace buckdens
