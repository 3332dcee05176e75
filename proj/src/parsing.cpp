#include "lfn/parsing.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "lfn/errors.hpp"

namespace lfn {

namespace {

std::string strip_spaces(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
    return out;
}

double parse_double(std::string_view text) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw DomainError("not a number: '" + std::string(text) + "'");
    return value;
}

}  // namespace

std::complex<double> parse_complex(std::string_view text) {
    std::string s = strip_spaces(text);
    if (s.empty()) throw DomainError("empty complex literal");
    if (s.back() != 'i' && s.back() != 'I') return {parse_double(s), 0.0};
    s.pop_back();
    // split at the last top-level +/- that is not an exponent sign
    size_t split = std::string::npos;
    for (size_t i = s.size(); i-- > 1;) {
        char c = s[i];
        if ((c == '+' || c == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string::npos)
        throw DomainError("complex literal must look like a+bi, a-bi or a");
    std::string re = s.substr(0, split);
    std::string im = s.substr(split);
    if (im == "+") im = "1";
    if (im == "-") im = "-1";
    return {parse_double(re), parse_double(im)};
}

Window parse_window(std::string_view text) {
    std::string s = strip_spaces(text);
    double v[4];
    size_t pos = 0;
    for (int i = 0; i < 4; ++i) {
        size_t comma = i < 3 ? s.find(',', pos) : s.size();
        if (comma == std::string::npos) throw DomainError("window needs four comma-separated numbers");
        v[i] = parse_double(std::string_view(s).substr(pos, comma - pos));
        pos = comma + 1;
    }
    Window w{v[0], v[1], v[2], v[3]};
    if (w.degenerate()) throw DomainError("window is degenerate");
    return w;
}

std::string format_complex(std::complex<double> z, int precision) {
    std::ostringstream out;
    out.precision(precision);
    out << z.real();
    if (z.imag() >= 0.0 || std::isnan(z.imag()))
        out << "+" << z.imag() << "i";
    else
        out << "-" << -z.imag() << "i";
    return out.str();
}

}  // namespace lfn
