#include "koopman/parse.hpp"

#include <cctype>
#include <charconv>

#include "koopman/errors.hpp"

namespace koopman {

namespace {

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= text.size();
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) { throw ParseError(what, pos); }
};

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

double read_number(Cursor& cur) {
    cur.skip_ws();
    double value = 0.0;
    const char* begin = cur.text.data() + cur.pos;
    const char* end = cur.text.data() + cur.text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr == begin) cur.fail("expected a number");
    cur.pos += static_cast<std::size_t>(ptr - begin);
    return value;
}

int read_exponent(Cursor& cur) {
    cur.skip_ws();
    int value = 0;
    const char* begin = cur.text.data() + cur.pos;
    const char* end = cur.text.data() + cur.text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr == begin || value < 0)
        cur.fail("expected a non-negative integer exponent");
    cur.pos += static_cast<std::size_t>(ptr - begin);
    return value;
}

std::string read_identifier(Cursor& cur) {
    cur.skip_ws();
    std::size_t start = cur.pos;
    if (start >= cur.text.size() || !ident_start(cur.text[start]))
        cur.fail("expected an identifier");
    std::size_t end = start;
    while (end < cur.text.size() && ident_char(cur.text[end])) ++end;
    cur.pos = end;
    return std::string(cur.text.substr(start, end - start));
}

// number ["i"], already positioned at a digit/sign/dot.
Cplx read_scalar(Cursor& cur) {
    double v = read_number(cur);
    if (cur.pos < cur.text.size() && cur.text[cur.pos] == 'i' &&
        !(cur.pos + 1 < cur.text.size() && ident_char(cur.text[cur.pos + 1]))) {
        ++cur.pos;
        return {0.0, v};
    }
    return {v, 0.0};
}

// "(" re [("+"|"-") im "i"] ")"  or  "(" im "i" ")".
Cplx read_paren_scalar(Cursor& cur) {
    if (!cur.accept('(')) cur.fail("expected '('");
    Cplx first = read_scalar(cur);
    Cplx value = first;
    char sign = cur.peek();
    if (sign == '+' || sign == '-') {
        ++cur.pos;
        Cplx second = read_scalar(cur);
        if (second.imag() == 0.0)
            cur.fail("expected the imaginary part to end in 'i'");
        if (first.imag() != 0.0) cur.fail("two imaginary parts in one coefficient");
        value = {first.real(), sign == '-' ? -second.imag() : second.imag()};
    }
    if (!cur.accept(')')) cur.fail("expected ')'");
    return value;
}

struct TermAcc {
    Cplx coeff{1.0, 0.0};
    MultiIndex exps;
};

void read_factor(Cursor& cur, const Chart& chart, TermAcc& term) {
    char c = cur.peek();
    if (c == '(') {
        term.coeff *= read_paren_scalar(cur);
        return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '+' ||
        c == '-') {
        term.coeff *= read_scalar(cur);
        return;
    }
    if (ident_start(c)) {
        std::size_t at = cur.pos;
        std::string name = read_identifier(cur);
        int idx = chart.try_index(name);
        if (idx < 0) {
            cur.pos = at;
            cur.fail("unknown coordinate '" + name + "'");
        }
        int e = 1;
        if (cur.accept('^')) e = read_exponent(cur);
        term.exps[idx] += e;
        return;
    }
    cur.fail("expected a coefficient or coordinate");
}

}  // namespace

Polynomial parse_polynomial(const Chart& chart, std::string_view text) {
    Cursor cur{text};
    Polynomial out(chart);
    if (cur.done()) cur.fail("empty polynomial");

    bool first = true;
    while (!cur.done()) {
        double sign = 1.0;
        char c = cur.peek();
        if (c == '+' || c == '-') {
            ++cur.pos;
            sign = c == '-' ? -1.0 : 1.0;
        } else if (!first) {
            cur.fail("expected '+' or '-' between terms");
        }
        TermAcc term;
        term.exps.assign(chart.dim(), 0);
        read_factor(cur, chart, term);
        while (cur.accept('*')) read_factor(cur, chart, term);
        out.add_term(std::move(term.exps), sign * term.coeff);
        first = false;
    }
    return out;
}

std::vector<std::string> scan_identifiers(std::string_view text) {
    std::vector<std::string> names;
    std::size_t i = 0;
    while (i < text.size()) {
        if (ident_start(text[i])) {
            std::size_t j = i;
            while (j < text.size() && ident_char(text[j])) ++j;
            std::string name(text.substr(i, j - i));
            bool seen = false;
            for (const auto& n : names) seen = seen || n == name;
            if (!seen) names.push_back(std::move(name));
            i = j;
        } else {
            // skip numbers wholesale so "2e3" does not surface "e3"
            if (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.') {
                std::size_t j = i;
                while (j < text.size() &&
                       (std::isalnum(static_cast<unsigned char>(text[j])) ||
                        text[j] == '.' || ((text[j] == '+' || text[j] == '-') &&
                                           (text[j - 1] == 'e' || text[j - 1] == 'E'))))
                    ++j;
                i = j;
            } else {
                ++i;
            }
        }
    }
    return names;
}

}  // namespace koopman
