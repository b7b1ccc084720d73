#include <cctype>
#include <map>
#include <stdexcept>

#include "bwu/weights.hpp"

namespace bwu {

namespace {

// Recursive-descent parser for the weight/theta mini-grammar:
//   expr   := ident '{' [field (',' field)*] '}'
//   field  := ident '=' (number | expr | list)
//   list   := '[' number (',' number)* ']'
struct Parser {
    const std::string& s;
    std::size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("weight grammar: " + what + " at offset " +
                                    std::to_string(pos) + " in '" + s + "'");
    }

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool peek(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }

    void expect(char c) {
        skip_ws();
        if (pos >= s.size() || s[pos] != c) fail(std::string("expected '") + c + "'");
        ++pos;
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        if (pos == start) fail("expected identifier");
        return s.substr(start, pos - start);
    }

    double number() {
        skip_ws();
        std::size_t end = pos;
        while (end < s.size() && (std::isdigit(static_cast<unsigned char>(s[end])) ||
                                  s[end] == '+' || s[end] == '-' || s[end] == '.' ||
                                  s[end] == 'e' || s[end] == 'E'))
            ++end;
        if (end == pos) fail("expected number");
        const std::string tok = s.substr(pos, end - pos);
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) fail("bad number '" + tok + "'");
            pos = end;
            return v;
        } catch (const std::exception&) {
            fail("bad number '" + tok + "'");
        }
    }

    std::vector<double> list() {
        expect('[');
        std::vector<double> out;
        out.push_back(number());
        while (peek(',')) {
            expect(',');
            out.push_back(number());
        }
        expect(']');
        return out;
    }

    struct Node {
        std::string name;
        std::map<std::string, double> nums;
        std::map<std::string, std::vector<double>> lists;
        std::map<std::string, Node> children;
    };

    Node expr() {
        Node n;
        n.name = ident();
        expect('{');
        if (!peek('}')) {
            for (;;) {
                const std::string key = ident();
                expect('=');
                skip_ws();
                if (pos < s.size() && s[pos] == '[') {
                    n.lists[key] = list();
                } else if (pos < s.size() &&
                           std::isalpha(static_cast<unsigned char>(s[pos]))) {
                    n.children[key] = expr();
                } else {
                    n.nums[key] = number();
                }
                if (!peek(',')) break;
                expect(',');
            }
        }
        expect('}');
        return n;
    }

    Node parse_full() {
        Node n = expr();
        skip_ws();
        if (pos != s.size()) fail("trailing input");
        return n;
    }
};

double need_num(const Parser::Node& n, const std::string& key) {
    auto it = n.nums.find(key);
    if (it == n.nums.end())
        throw std::invalid_argument("weight grammar: " + n.name + " needs field '" +
                                    key + "'");
    return it->second;
}

ThetaFunction theta_from(const Parser::Node& n) {
    if (n.name == "power") return ThetaFunction::power(need_num(n, "theta"));
    if (n.name == "max_powers")
        return ThetaFunction::max_powers(need_num(n, "alpha"), need_num(n, "beta"));
    if (n.name == "power_log")
        return ThetaFunction::power_log(need_num(n, "theta"), need_num(n, "beta1"),
                                        need_num(n, "beta2"));
    throw std::invalid_argument("weight grammar: unknown theta family '" + n.name + "'");
}

Weight weight_from(const Parser::Node& n) {
    if (n.name == "power") return Weight::power(need_num(n, "sigma"));
    if (n.name == "power_log")
        return Weight::power_log(need_num(n, "sigma"), need_num(n, "beta1"),
                                 need_num(n, "beta2"));
    if (n.name == "max_powers")
        return Weight::max_powers(need_num(n, "e1"), need_num(n, "e2"));
    if (n.name == "composite") {
        auto w0 = n.children.find("w0");
        auto w1 = n.children.find("w1");
        auto th = n.children.find("theta");
        if (w0 == n.children.end() || w1 == n.children.end() || th == n.children.end())
            throw std::invalid_argument("weight grammar: composite needs w0, w1, theta");
        return Weight::composite(weight_from(w0->second), weight_from(w1->second),
                                 theta_from(th->second));
    }
    if (n.name == "table") {
        auto r = n.lists.find("r");
        auto w = n.lists.find("w");
        if (r == n.lists.end() || w == n.lists.end())
            throw std::invalid_argument("weight grammar: table needs r=[...], w=[...]");
        return Weight::table(r->second, w->second);
    }
    if (n.name == "scaled") {
        auto w = n.children.find("w");
        if (w == n.children.end())
            throw std::invalid_argument("weight grammar: scaled needs w=...");
        return weight_from(w->second).scaled(need_num(n, "factor"));
    }
    throw std::invalid_argument("weight grammar: unknown weight family '" + n.name + "'");
}

} // namespace

Weight parse_weight(const std::string& text) {
    Parser p(text);
    return weight_from(p.parse_full());
}

ThetaFunction parse_theta(const std::string& text) {
    Parser p(text);
    return theta_from(p.parse_full());
}

} // namespace bwu
