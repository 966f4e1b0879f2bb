#pragma once

#include <map>
#include <string>

#include "cremona/hompoly.hpp"

namespace cremona {

/// Recursive-descent parser for polynomial expressions in z1, z2, z3.
/// Grammar: rational literals (integer or a/b), named parameters, the
/// operators + - * ^ (non-negative integer exponents) and parentheses.
/// Implicit multiplication is a syntax error. Parameters are substituted at
/// parse time from the supplied table. The result may be inhomogeneous;
/// homogeneity is the caller's contract.
class PolyParser {
public:
    using ParamTable = std::map<std::string, Rat>;
    using RawPoly = std::map<Exp3, Rat>;

    PolyParser(std::string text, const ParamTable& params)
        : text_(std::move(text)), params_(params)
    {
    }

    RawPoly parse()
    {
        pos_ = 0;
        RawPoly p = parse_expr();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected trailing input");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const
    {
        throw Error(ErrorKind::SyntaxError,
                    msg + " at position " + std::to_string(pos_) + " in '" + text_ + "'");
    }

    void skip_ws()
    {
        while (pos_ < text_.size() && isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool peek(char c)
    {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept(char c)
    {
        if (!peek(c))
            return false;
        ++pos_;
        return true;
    }

    static RawPoly add(RawPoly a, const RawPoly& b, int sgn)
    {
        for (const auto& [e, c] : b) {
            auto [it, inserted] = a.try_emplace(e, Rat(0));
            it->second += sgn > 0 ? c : Rat(-c);
            if (sign(it->second) == 0)
                a.erase(it);
        }
        return a;
    }

    static RawPoly mul(const RawPoly& a, const RawPoly& b)
    {
        RawPoly r;
        for (const auto& [ea, ca] : a)
            for (const auto& [eb, cb] : b) {
                Exp3 e{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]};
                auto [it, inserted] = r.try_emplace(e, Rat(0));
                it->second += ca * cb;
                if (sign(it->second) == 0)
                    r.erase(it);
            }
        return r;
    }

    static RawPoly constant(const Rat& v)
    {
        RawPoly r;
        if (sign(v) != 0)
            r.emplace(Exp3{0, 0, 0}, v);
        return r;
    }

    RawPoly parse_expr()
    {
        int lead = 1;
        skip_ws();
        if (accept('-'))
            lead = -1;
        else
            accept('+');
        RawPoly r = parse_term();
        if (lead < 0)
            r = add(RawPoly{}, r, -1);
        while (true) {
            if (accept('+'))
                r = add(std::move(r), parse_term(), 1);
            else if (accept('-'))
                r = add(std::move(r), parse_term(), -1);
            else
                break;
        }
        return r;
    }

    RawPoly parse_term()
    {
        RawPoly r = parse_factor();
        while (true) {
            skip_ws();
            if (accept('*')) {
                r = mul(r, parse_factor());
                continue;
            }
            // implicit multiplication (e.g. "2z1" or ") (") is disallowed
            if (pos_ < text_.size()) {
                char c = text_[pos_];
                if (isalnum(static_cast<unsigned char>(c)) || c == '(')
                    fail("missing '*' (implicit multiplication is not allowed)");
            }
            break;
        }
        return r;
    }

    RawPoly parse_factor()
    {
        RawPoly base = parse_base();
        skip_ws();
        if (accept('^')) {
            long e = parse_uint("exponent");
            RawPoly r = constant(Rat(1));
            for (long i = 0; i < e; ++i)
                r = mul(r, base);
            return r;
        }
        return base;
    }

    RawPoly parse_base()
    {
        skip_ws();
        if (pos_ >= text_.size())
            fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            RawPoly r = parse_expr();
            if (!accept(')'))
                fail("expected ')'");
            return r;
        }
        if (c == '-') {
            ++pos_;
            return add(RawPoly{}, parse_factor(), -1);
        }
        if (isdigit(static_cast<unsigned char>(c))) {
            long num_start = static_cast<long>(pos_);
            Int num = parse_int();
            (void)num_start;
            skip_ws();
            if (accept('/')) {
                skip_ws();
                if (pos_ >= text_.size() || !isdigit(static_cast<unsigned char>(text_[pos_])))
                    fail("expected integer denominator");
                Int den = parse_int();
                if (den == 0)
                    fail("zero denominator");
                return constant(make_rat(num, den));
            }
            return constant(Rat(num));
        }
        if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name;
            while (pos_ < text_.size() &&
                   (isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                name += text_[pos_++];
            if (name == "z1")
                return {{Exp3{1, 0, 0}, Rat(1)}};
            if (name == "z2")
                return {{Exp3{0, 1, 0}, Rat(1)}};
            if (name == "z3")
                return {{Exp3{0, 0, 1}, Rat(1)}};
            auto it = params_.find(name);
            if (it == params_.end())
                throw Error(ErrorKind::UnboundParameter,
                            "parameter '" + name + "' has no value (position " +
                                std::to_string(pos_ - name.size()) + ")");
            return constant(it->second);
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    Int parse_int()
    {
        std::string digits;
        while (pos_ < text_.size() && isdigit(static_cast<unsigned char>(text_[pos_])))
            digits += text_[pos_++];
        return Int(digits);
    }

    long parse_uint(const char* what)
    {
        skip_ws();
        if (pos_ >= text_.size() || !isdigit(static_cast<unsigned char>(text_[pos_])))
            fail(std::string("expected non-negative integer ") + what);
        Int v = parse_int();
        if (v > 1000)
            fail(std::string("unreasonably large ") + what);
        return v.get_si();
    }

    std::string text_;
    const ParamTable& params_;
    size_t pos_ = 0;
};

/// Parses an expression and checks homogeneity.
inline HomPoly parse_poly(const std::string& text, const PolyParser::ParamTable& params = {})
{
    PolyParser p(text, params);
    auto raw = p.parse();
    if (raw.empty())
        return HomPoly();
    int deg = -1;
    for (const auto& [e, c] : raw) {
        (void)c;
        if (deg < 0)
            deg = exp_sum(e);
        else if (exp_sum(e) != deg)
            throw Error(ErrorKind::NonHomogeneous,
                        "expression '" + text + "' mixes total degrees");
    }
    return HomPoly::from_terms(raw);
}

} // namespace cremona
